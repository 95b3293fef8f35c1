//! Built-in fixtures: the explicit family, the non-extendable function on
//! `{xy(x − y) = 0}`, and the char-2 quartic.

use rankforge::error::Result;
use rankforge::explicit::{build, ExplicitVariety};
use rankforge::geometry::VarietyPoints;
use rankforge::gf::{Fe, PrimeField};
use rankforge::poly::{Monomial, MultiPoly};
use rankforge::weakpoly::FunctionOnX;

pub fn xn(d: usize, n: usize, q: u64) -> Result<ExplicitVariety> {
    build(d, n, q)
}

/// `xy(x − y) = x²y − xy²` over `F_5`.
pub fn counterexample_poly() -> MultiPoly {
    let f = PrimeField::new(5).expect("prime");
    MultiPoly::from_terms(f, 2, [(1, vec![2, 1]), (-1, vec![1, 2])]).expect("well formed")
}

/// `x` on the diagonal line, zero on the two axes.
pub fn counterexample_function(x: &VarietyPoints) -> FunctionOnX {
    FunctionOnX::from_fn(x, |p| if p[0] == p[1] { p[0] } else { Fe::ZERO })
}

/// `Σ_{i<j<k<l} x_i x_j x_k x_l` over `F_2`.
pub fn char2_quartic(n: usize) -> MultiPoly {
    let f = PrimeField::new(2).expect("prime");
    let mut p = MultiPoly::zero(f, n);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() == 4 {
            let e = (0..n).map(|i| mask >> i & 1).collect();
            p.add_term(Monomial(e), Fe::ONE);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_terms() {
        assert_eq!(char2_quartic(5).num_terms(), 5);
        assert_eq!(char2_quartic(6).num_terms(), 15);
        assert_eq!(char2_quartic(5).degree(), 4);
    }
}
