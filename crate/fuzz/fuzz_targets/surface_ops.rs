#![no_main]

use libfuzzer_sys::fuzz_target;
use origami_gaps::origami::{HolonomyOracle, Origami};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(o) = Origami::parse(s) else { return };
    if o.tile_count() > 64 {
        return;
    }
    // vertex classes partition the tiles
    let total: usize = o.vertex_classes().iter().map(|c| c.len()).sum();
    assert_eq!(total, o.tile_count());
    // exact group relations of the S and T actions
    assert_eq!(o.act_s().act_s().act_s().act_s(), o);
    assert_eq!(o.act_t().act_t_inv(), o);
    let mut st6 = o.clone();
    for _ in 0..6 {
        st6 = st6.act_s().act_t();
    }
    assert!(st6.is_isomorphic(&o));
    // holonomy membership on a small window never panics and respects
    // the central symmetry
    let oracle = HolonomyOracle::new(o);
    for x in -3i64..=3 {
        for y in -3i64..=3 {
            if (x, y) == (0, 0) {
                continue;
            }
            assert_eq!(oracle.is_holonomy(x, y), oracle.is_holonomy(-x, -y));
        }
    }
});
