use super::Norm;
use crate::error::Result;
use crate::group::{Element, GroupDescriptor};
use crate::rational::{int, Rational};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationEstimate {
    pub element: String,
    /// `min ν(fⁿ)/n` over `1 ≤ n ≤ n_max` (or up to the order of `f`).
    #[serde(with = "crate::rational::serde_p_q")]
    pub upper: Rational,
    /// `fⁿ = 1` for some `n ≤ n_max`, so the stable value is exactly 0.
    pub exact_zero: bool,
    pub n_max: usize,
    /// Smallest `n ≤ n_max` with `fⁿ = 1`.
    pub order: Option<usize>,
}

/// Upper bound for `lim ν(fⁿ)/n`. Subadditivity of `n ↦ ν(fⁿ)` makes the
/// limit equal the infimum, so every prefix minimum is an upper bound.
pub fn stabilization_upper<N: Norm>(
    d: &GroupDescriptor,
    norm: &N,
    f: &Element,
    n_max: usize,
) -> Result<StabilizationEstimate> {
    let mut power = d.identity();
    let mut upper: Option<Rational> = None;
    let mut order = None;
    for n in 1..=n_max {
        power = d.compose(&power, f)?;
        let v = norm.norm(&power)? / int(n as i64);
        upper = Some(upper.map_or(v, |u| u.min(v)));
        if power.is_identity() {
            order = Some(n);
            break;
        }
    }
    Ok(StabilizationEstimate {
        element: f.to_string(),
        upper: if order.is_some() { int(0) } else { upper.unwrap_or_else(|| norm.norm(f).unwrap_or(int(0))) },
        exact_zero: order.is_some(),
        n_max,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{SupportNorm, TrivialNorm};

    #[test]
    fn torsion_is_exactly_zero() {
        let d: GroupDescriptor = "sn:9".parse().unwrap();
        let f = d.parse_element("(1 2 3)").unwrap();
        let e = stabilization_upper(&d, &SupportNorm, &f, 3).unwrap();
        assert!(e.exact_zero);
        assert_eq!(e.upper, int(0));
        assert_eq!(e.order, Some(3));
        let e = stabilization_upper(&d, &SupportNorm, &f, 2).unwrap();
        assert!(!e.exact_zero);
        assert_eq!(e.upper, Rational::new(3, 2));
    }

    #[test]
    fn trivial_norm_decays_like_one_over_n() {
        let d = GroupDescriptor::AffZ;
        let z = Element::aff(1, false);
        for n in [1usize, 5, 40] {
            let e = stabilization_upper(&d, &TrivialNorm, &z, n).unwrap();
            assert_eq!(e.upper, Rational::new(1, n as i64));
            assert!(!e.exact_zero);
        }
    }
}
