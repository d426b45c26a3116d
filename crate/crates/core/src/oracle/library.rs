//! Concrete oracles for the potentials and bodies used by the instance
//! registry and the examples.

use super::{separate_ball, FunctionOracle, SetOracle};

fn soft_threshold(v: f64, thr: f64) -> f64 {
    if v > thr {
        v - thr
    } else if v < -thr {
        v + thr
    } else {
        0.0
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `f ≡ 0` on `R^d`.
pub fn zero(d: usize) -> FunctionOracle {
    FunctionOracle::new("zero", d, 0.0, |_| 0.0)
        .with_subgradient(move |x| vec![0.0; x.len()])
        .with_proximal(|x, _| x.to_vec())
}

/// `f(x) = scale * |x - shift|_1`, Lipschitz constant `scale * sqrt(d)`.
pub fn shifted_l1(shift: Vec<f64>, scale: f64) -> FunctionOracle {
    let d = shift.len();
    let (s1, s2, s3) = (shift.clone(), shift.clone(), shift);
    FunctionOracle::new(
        format!("{scale}*|x - c|_1"),
        d,
        scale * (d as f64).sqrt(),
        move |x| scale * x.iter().zip(&s1).map(|(xi, ci)| (xi - ci).abs()).sum::<f64>(),
    )
    .with_subgradient(move |x| x.iter().zip(&s2).map(|(xi, ci)| scale * sign(xi - ci)).collect())
    .with_proximal(move |x, lambda| {
        x.iter()
            .zip(&s3)
            .map(|(xi, ci)| ci + soft_threshold(xi - ci, lambda * scale))
            .collect()
    })
}

/// `f(x) = |x|_1` on `R^d`.
pub fn l1_norm(d: usize) -> FunctionOracle {
    let mut f = shifted_l1(vec![0.0; d], 1.0);
    f.name = "|x|_1".into();
    f
}

/// `f(x) = |x|` on `R`.
pub fn abs_1d() -> FunctionOracle {
    let mut f = l1_norm(1);
    f.name = "|x|".into();
    f
}

/// `f(x) = max(x, 0)` on `R`.
pub fn positive_part_1d() -> FunctionOracle {
    FunctionOracle::new("max(x,0)", 1, 1.0, |x| x[0].max(0.0))
        .with_subgradient(|x| vec![if x[0] > 0.0 { 1.0 } else { 0.0 }])
        .with_proximal(|x, lambda| {
            let v = x[0];
            vec![if v > lambda {
                v - lambda
            } else if v < 0.0 {
                v
            } else {
                0.0
            }]
        })
}

/// `f(x) = <c, x>`, Lipschitz constant `|c|`.
pub fn linear(c: Vec<f64>) -> FunctionOracle {
    let d = c.len();
    let lip = crate::linalg::norm(&c);
    let (c1, c2, c3) = (c.clone(), c.clone(), c);
    FunctionOracle::new("<c,x>", d, lip, move |x| crate::linalg::dot(&c1, x))
        .with_subgradient(move |_| c2.clone())
        .with_proximal(move |x, lambda| x.iter().zip(&c3).map(|(xi, ci)| xi - lambda * ci).collect())
}

/// The cube `[-half, half]^d`.
pub fn boxed(d: usize, half: f64) -> SetOracle {
    SetOracle::from_projection(
        format!("[-{half},{half}]^{d}"),
        d,
        half,
        half * (d as f64).sqrt(),
        move |x| x.iter().all(|v| v.abs() <= half),
        move |x| x.iter().map(|v| v.clamp(-half, half)).collect(),
    )
}

/// The closed Euclidean ball of the given radius around the origin.
pub fn ball(d: usize, radius: f64) -> SetOracle {
    let center = vec![0.0; d];
    let mut k = SetOracle::from_projection(
        format!("{radius}*B_{d}"),
        d,
        radius,
        radius,
        move |x| crate::linalg::norm(x) <= radius,
        move |x| {
            let n = crate::linalg::norm(x);
            if n <= radius {
                x.to_vec()
            } else {
                x.iter().map(|v| v * radius / n).collect()
            }
        },
    );
    k.separation = std::sync::Arc::new(move |x| separate_ball(&center, radius, x));
    k
}

pub fn unit_ball(d: usize) -> SetOracle {
    ball(d, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prox_objective(f: &FunctionOracle, u: &[f64], x: &[f64], lambda: f64) -> f64 {
        f.value(u) + crate::linalg::dist(u, x).powi(2) / (2.0 * lambda)
    }

    proptest! {
        #[test]
        fn prox_beats_probe_points(
            x in prop::collection::vec(-3.0f64..3.0, 3),
            z in prop::collection::vec(-3.0f64..3.0, 3),
            lambda in 0.01f64..5.0,
        ) {
            for f in [l1_norm(3), shifted_l1(vec![0.5, -0.2, 1.0], 2.0), linear(vec![1.0, -2.0, 0.5]), zero(3)] {
                let p = f.prox(&x, lambda).unwrap();
                prop_assert!(prox_objective(&f, &p, &x, lambda) <= prox_objective(&f, &z, &x, lambda) + 1e-12);
            }
        }

        #[test]
        fn subgradient_inequality(
            x in prop::collection::vec(-3.0f64..3.0, 2),
            y in prop::collection::vec(-3.0f64..3.0, 2),
        ) {
            for f in [l1_norm(2), shifted_l1(vec![0.5, 0.5], 1.0), linear(vec![0.6, 0.8]), zero(2)] {
                let g = f.subgradient(&x).unwrap();
                let lin = f.value(&x) + crate::linalg::dot(&g, &crate::linalg::sub(&y, &x));
                prop_assert!(f.value(&y) >= lin - 1e-12);
            }
        }

        #[test]
        fn projection_fixes_members(x in prop::collection::vec(-2.0f64..2.0, 2)) {
            for k in [boxed(2, 1.0), unit_ball(2)] {
                prop_assert_eq!(k.contains(&x), k.separate(&x).is_inside());
                if k.contains(&x) {
                    prop_assert_eq!(k.project(&x).unwrap(), x.clone());
                }
            }
        }
    }

    #[test]
    fn positive_part_prox() {
        let f = positive_part_1d();
        assert_eq!(f.prox(&[3.0], 1.0).unwrap(), vec![2.0]);
        assert_eq!(f.prox(&[0.5], 1.0).unwrap(), vec![0.0]);
        assert_eq!(f.prox(&[-2.0], 1.0).unwrap(), vec![-2.0]);
    }
}
