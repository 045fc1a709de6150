use cslab::valence_bond::{BondRule, DimerCovering};
use cslab::LatticeSpec;
use num_complex::Complex64;

/// Site at column `c` (0 = leftmost) and row `r` (1-based).
pub fn at(l: &LatticeSpec, c: i64, r: i64) -> usize {
    l.index_of(l.min_n1() + c, r)
}

/// The four configurations of the reference figure with their seam counts:
/// 6x3 with 2 and 1 crossings, 6x4 with 1 and 2.
pub fn fig2_coverings() -> Vec<(LatticeSpec, DimerCovering, usize)> {
    let l3 = LatticeSpec::new(6, 3).unwrap();
    let l4 = LatticeSpec::new(6, 4).unwrap();
    let rule = BondRule::default();
    let a = |l: &LatticeSpec, c, r| at(l, c, r);

    let top_left = vec![
        (a(&l3, 5, 1), a(&l3, 0, 1)),
        (a(&l3, 5, 2), a(&l3, 0, 2)),
        (a(&l3, 0, 3), a(&l3, 1, 3)),
        (a(&l3, 1, 1), a(&l3, 1, 2)),
        (a(&l3, 2, 1), a(&l3, 3, 1)),
        (a(&l3, 2, 2), a(&l3, 2, 3)),
        (a(&l3, 3, 2), a(&l3, 3, 3)),
        (a(&l3, 4, 3), a(&l3, 5, 3)),
        (a(&l3, 4, 1), a(&l3, 4, 2)),
    ];
    let top_right = vec![
        (a(&l3, 5, 1), a(&l3, 0, 1)),
        (a(&l3, 1, 1), a(&l3, 2, 1)),
        (a(&l3, 3, 1), a(&l3, 4, 1)),
        (a(&l3, 0, 2), a(&l3, 0, 3)),
        (a(&l3, 1, 2), a(&l3, 1, 3)),
        (a(&l3, 2, 2), a(&l3, 2, 3)),
        (a(&l3, 3, 2), a(&l3, 3, 3)),
        (a(&l3, 4, 2), a(&l3, 4, 3)),
        (a(&l3, 5, 2), a(&l3, 5, 3)),
    ];
    let mut bottom_left = vec![
        (a(&l4, 0, 1), a(&l4, 1, 1)),
        (a(&l4, 2, 1), a(&l4, 3, 1)),
        (a(&l4, 4, 1), a(&l4, 5, 1)),
        (a(&l4, 1, 2), a(&l4, 2, 2)),
        (a(&l4, 3, 2), a(&l4, 4, 2)),
        (a(&l4, 5, 2), a(&l4, 0, 2)),
    ];
    let mut bottom_right = vec![(a(&l4, 5, 1), a(&l4, 0, 1)), (a(&l4, 5, 2), a(&l4, 0, 2))];
    for c in 0..6 {
        bottom_left.push((a(&l4, c, 3), a(&l4, c, 4)));
        bottom_right.push((a(&l4, c, 3), a(&l4, c, 4)));
        if (1..5).contains(&c) {
            bottom_right.push((a(&l4, c, 1), a(&l4, c, 2)));
        }
    }
    vec![
        (l3, DimerCovering::new(&l3, rule, &top_left).unwrap(), 2),
        (l3, DimerCovering::new(&l3, rule, &top_right).unwrap(), 1),
        (l4, DimerCovering::new(&l4, rule, &bottom_left).unwrap(), 1),
        (l4, DimerCovering::new(&l4, rule, &bottom_right).unwrap(), 2),
    ]
}

/// `<alpha|U|alpha>` from an explicit 2^M vector of singlet products.
pub fn explicit_ulsm(l: &LatticeSpec, cov: &DimerCovering) -> Complex64 {
    let m = l.num_sites();
    let n1 = l.n1() as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for bits in 0u32..(1 << m) {
        let mut amp = 1.0f64;
        for &(a, b) in &cov.pairs() {
            match (bits >> a & 1, bits >> b & 1) {
                (1, 0) => amp *= std::f64::consts::FRAC_1_SQRT_2,
                (0, 1) => amp *= -std::f64::consts::FRAC_1_SQRT_2,
                _ => amp = 0.0,
            }
        }
        if amp == 0.0 {
            continue;
        }
        let arg: f64 = (0..m)
            .map(|s| {
                let sz = if bits >> s & 1 == 1 { 1.0 } else { -1.0 };
                l.site(s).n1 as f64 * sz
            })
            .sum();
        total += amp * amp * Complex64::from_polar(1.0, std::f64::consts::PI * arg / n1);
    }
    total
}
