//! Exact rational plane geometry: points, half-plane clipping of convex
//! polygons, areas. No floating point, no tolerances.

use num_traits::Zero;

use crate::rational::Q;

pub type Point = (Q, Q);

/// A half-plane { (a,b) : ca*a + cb*b <= rhs }.
#[derive(Clone, Copy, Debug)]
pub struct HalfPlane {
    pub ca: Q,
    pub cb: Q,
    pub rhs: Q,
}

impl HalfPlane {
    pub fn new(ca: Q, cb: Q, rhs: Q) -> HalfPlane {
        HalfPlane { ca, cb, rhs }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.ca * p.0 + self.cb * p.1 <= self.rhs
    }

    fn value(&self, p: Point) -> Q {
        self.ca * p.0 + self.cb * p.1 - self.rhs
    }
}

/// Convex polygon as a counterclockwise vertex list. Maintained free of
/// duplicate and collinear vertices; may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Polygon {
        let mut p = Polygon { vertices };
        p.normalize();
        p
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Twice the signed area (positive for counterclockwise order).
    pub fn signed_area_doubled(&self) -> Q {
        let n = self.vertices.len();
        let mut acc = Q::zero();
        for i in 0..n {
            let (x1, y1) = self.vertices[i];
            let (x2, y2) = self.vertices[(i + 1) % n];
            acc += x1 * y2 - x2 * y1;
        }
        acc
    }

    pub fn area(&self) -> Q {
        let two = Q::from_integer(2);
        let a = self.signed_area_doubled();
        if a < Q::zero() {
            -a / two
        } else {
            a / two
        }
    }

    /// Sutherland-Hodgman clip against a half-plane.
    pub fn clip(&self, h: &HalfPlane) -> Polygon {
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let mut out = Vec::new();
        for i in 0..n {
            let cur = self.vertices[i];
            let next = self.vertices[(i + 1) % n];
            let vc = h.value(cur);
            let vn = h.value(next);
            let cur_in = vc <= Q::zero();
            let next_in = vn <= Q::zero();
            if cur_in {
                out.push(cur);
            }
            if cur_in != next_in {
                // exact intersection of the edge with the boundary line
                let t = vc / (vc - vn);
                let x = cur.0 + t * (next.0 - cur.0);
                let y = cur.1 + t * (next.1 - cur.1);
                out.push((x, y));
            }
        }
        Polygon::new(out)
    }

    /// Strict interior test for a convex CCW polygon.
    pub fn contains_interior(&self, p: Point) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= Q::zero() {
                return false;
            }
        }
        true
    }

    /// Drop duplicate points and collinear vertices; enforce CCW order.
    fn normalize(&mut self) {
        let mut v: Vec<Point> = Vec::with_capacity(self.vertices.len());
        for &p in &self.vertices {
            if v.last() != Some(&p) {
                v.push(p);
            }
        }
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        // remove collinear triples
        loop {
            let n = v.len();
            if n < 3 {
                break;
            }
            let mut removed = false;
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let prev = v[(i + n - 1) % n];
                let cur = v[i];
                let next = v[(i + 1) % n];
                let cross =
                    (cur.0 - prev.0) * (next.1 - prev.1) - (cur.1 - prev.1) * (next.0 - prev.0);
                if cross.is_zero() {
                    removed = true;
                } else {
                    out.push(cur);
                }
            }
            v = out;
            if !removed {
                break;
            }
        }
        if v.len() >= 3 {
            // orient counterclockwise
            let mut acc = Q::zero();
            let n = v.len();
            for i in 0..n {
                let (x1, y1) = v[i];
                let (x2, y2) = v[(i + 1) % n];
                acc += x1 * y2 - x2 * y1;
            }
            if acc < Q::zero() {
                v.reverse();
            }
            if acc.is_zero() {
                v.clear();
            } else {
                // canonical starting vertex: lexicographic minimum
                let start = (0..v.len())
                    .min_by_key(|&i| v[i])
                    .unwrap();
                v.rotate_left(start);
            }
        } else {
            v.clear();
        }
        self.vertices = v;
    }
}
