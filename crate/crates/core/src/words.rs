//! Words in the generators S, T of SL(2,Z) and their integer matrices.
//!
//! S is the counterclockwise quarter turn (rows 0 -1 / 1 0), T the unit
//! horizontal shear (rows 1 1 / 0 1). Words act on surfaces the way
//! matrix products act on the plane: the rightmost letter applies first.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    SInv,
    T,
    TInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::SInv,
            Letter::SInv => Letter::S,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
        }
    }

    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::S => Mat2::new(0, -1, 1, 0),
            Letter::SInv => Mat2::new(0, 1, -1, 0),
            Letter::T => Mat2::new(1, 1, 0, 1),
            Letter::TInv => Mat2::new(1, -1, 0, 1),
        }
    }
}

/// A word in S, T and their inverses, leftmost letter outermost:
/// `[T, S]` is the matrix product T*S, i.e. "apply S, then T".
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
            .iter()
            .fold(Mat2::identity(), |acc, l| acc.mul(&l.matrix()))
    }

    /// In PSL(2,Z) every S-inverse can be spelled S (they differ by -I),
    /// which is how cusp conjugators are conventionally written.
    pub fn psl_normalized(&self) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| match l {
                    Letter::SInv => Letter::S,
                    other => *other,
                })
                .collect(),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        // Collapse runs of T / T^-1 into powers.
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            match self.0[i] {
                Letter::S => {
                    parts.push("S".into());
                    i += 1;
                }
                Letter::SInv => {
                    parts.push("S^-1".into());
                    i += 1;
                }
                Letter::T | Letter::TInv => {
                    let mut exp: i64 = 0;
                    while i < self.0.len() {
                        match self.0[i] {
                            Letter::T => exp += 1,
                            Letter::TInv => exp -= 1,
                            _ => break,
                        }
                        i += 1;
                    }
                    if exp == 1 {
                        parts.push("T".into());
                    } else if exp != 0 {
                        parts.push(format!("T^{exp}"));
                    }
                }
            }
        }
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// 2x2 integer matrix with determinant +/-1 in practice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Mat2 {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn pow_t(exp: i64) -> Mat2 {
        Mat2::new(1, exp, 0, 1)
    }

    /// Decompose an SL(2,Z) matrix into a word in S and T, up to sign:
    /// `word.matrix() == M` or `== -M`. Continued-fraction reduction on
    /// the first column.
    pub fn to_word_psl(&self) -> Word {
        assert_eq!(self.det(), 1, "to_word_psl requires det 1");
        let mut m = *self;
        // Letters collected so far, such that collected * m == original.
        let mut letters: Vec<Letter> = Vec::new();
        while m.c != 0 {
            // Choose k minimizing |a - k c|; then T^k S * (S^-1 T^-k m).
            let k = div_round(m.a, m.c);
            // m := T^-k * m
            m = Mat2::pow_t(-k).mul(&m);
            // now |m.a| <= |m.c| / 2 (or 0); m := S^-1 * m swaps rows.
            m = Letter::SInv.matrix().mul(&m);
            push_t_power(&mut letters, k);
            letters.push(Letter::S);
        }
        // m is now [[e, b],[0, e]] with e = +/-1.
        let e = m.a;
        debug_assert!(e == 1 || e == -1);
        debug_assert_eq!(m.d, e);
        push_t_power(&mut letters, e * m.b);
        Word(letters)
    }
}

fn push_t_power(letters: &mut Vec<Letter>, exp: i64) {
    let l = if exp >= 0 { Letter::T } else { Letter::TInv };
    for _ in 0..exp.unsigned_abs() {
        letters.push(l);
    }
}

fn div_round(a: i64, b: i64) -> i64 {
    // Round a/b to nearest (ties toward zero); only magnitudes matter.
    let q = a as f64 / b as f64;
    q.round() as i64
}

/// Extended gcd: returns (g, x, y) with x*p + y*q = g.
pub fn ext_gcd(p: i64, q: i64) -> (i64, i64, i64) {
    if q == 0 {
        (p.abs(), p.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(q, p.rem_euclid(q));
        (g, y, x - (p.div_euclid(q)) * y)
    }
}

/// A matrix carrying the direction (p,q) to (1,0); p, q coprime.
pub fn direction_to_horizontal(p: i64, q: i64) -> Mat2 {
    let (g, x, y) = ext_gcd(p, q);
    assert_eq!(g, 1, "direction must be primitive");
    let m = Mat2::new(x, y, -q, p);
    debug_assert_eq!(m.det(), 1);
    debug_assert_eq!((m.a * p + m.b * q, m.c * p + m.d * q), (1, 0));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_matrices_satisfy_group_relations() {
        let s = Letter::S.matrix();
        let s4 = s.mul(&s).mul(&s).mul(&s);
        assert_eq!(s4, Mat2::identity());
        let st = s.mul(&Letter::T.matrix());
        let mut p = Mat2::identity();
        for _ in 0..6 {
            p = p.mul(&st);
        }
        assert_eq!(p, Mat2::identity());
        assert_eq!(
            Letter::T.matrix().mul(&Letter::TInv.matrix()),
            Mat2::identity()
        );
    }

    #[test]
    fn word_matrix_composition_order() {
        // [T, S] means T*S.
        let w = Word(vec![Letter::T, Letter::S]);
        assert_eq!(w.matrix(), Letter::T.matrix().mul(&Letter::S.matrix()));
        assert_eq!(w.inverse().matrix().mul(&w.matrix()), Mat2::identity());
    }

    #[test]
    fn decompose_roundtrips_up_to_sign() {
        let cases = [
            Mat2::identity(),
            Mat2::new(0, -1, 1, 0),
            Mat2::new(1, 5, 0, 1),
            Mat2::new(3, 5, 1, 2),
            Mat2::new(-2, -1, 1, 0),
            Mat2::new(7, -3, 5, -2),
            Mat2::new(-1, 0, 0, -1),
        ];
        for m in cases {
            assert_eq!(m.det(), 1);
            let w = m.to_word_psl();
            let r = w.matrix();
            assert!(r == m || r == m.neg(), "{m:?} decomposed to {r:?}");
        }
    }

    #[test]
    fn direction_matrix_sends_direction_to_e1() {
        for (p, q) in [(1, 0), (5, 2), (3, 1), (1, 1), (7, 4)] {
            let m = direction_to_horizontal(p, q);
            assert_eq!((m.a * p + m.b * q, m.c * p + m.d * q), (1, 0));
        }
    }

    #[test]
    fn word_display_collapses_powers() {
        let w = Word(vec![
            Letter::T,
            Letter::T,
            Letter::T,
            Letter::S,
            Letter::T,
            Letter::T,
        ]);
        assert_eq!(w.to_string(), "T^3 S T^2");
        assert_eq!(Word::identity().to_string(), "1");
    }
}
