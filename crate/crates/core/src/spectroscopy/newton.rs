use nalgebra::DMatrix;
use serde::Serialize;

/// Eigenvalues recovered from power sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Descending, each in [0, 1].
    pub eigenvalues: Vec<f64>,
    /// Human-readable notes on any projection or clamping applied.
    pub notes: Vec<String>,
}

/// Elementary symmetric polynomials `e_0..=e_m` from power sums `p_1..=p_m`.
pub fn elementary_symmetric(power_sums: &[f64]) -> Vec<f64> {
    let m = power_sums.len();
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for k in 1..=m {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * power_sums[i - 1];
        }
        e[k] = acc / k as f64;
    }
    e
}

/// Power sums `p_1..=p_m` of a spectrum.
pub fn power_sums(eigenvalues: &[f64], m: usize) -> Vec<f64> {
    (1..=m)
        .map(|j| eigenvalues.iter().map(|l| l.powi(j as i32)).sum())
        .collect()
}

fn poly_eval(coeffs: &[f64], x: f64) -> (f64, f64) {
    // coeffs[j] multiplies x^{m-j}; returns value and derivative.
    let mut v = 0.0;
    let mut d = 0.0;
    for &c in coeffs {
        d = d * x + v;
        v = v * x + c;
    }
    (v, d)
}

/// Reconstructs the `m = traces.len()` largest eigenvalues from
/// `traces[j] = Tr(ρ^{j+1})`.
///
/// The characteristic polynomial comes from Newton's identities and its roots
/// from the companion-matrix eigenvalues. Complex roots (possible with noisy
/// input) are replaced by their real parts, and all roots are clamped to
/// [0, 1].
pub fn newton_girard(traces: &[f64]) -> Spectrum {
    let m = traces.len();
    let mut notes = Vec::new();
    if m == 0 {
        return Spectrum {
            eigenvalues: vec![],
            notes,
        };
    }
    if (traces[0] - 1.0).abs() > 1e-6 {
        notes.push(format!("first trace is {} rather than 1", traces[0]));
    }
    let e = elementary_symmetric(traces);
    // x^m − e1 x^{m−1} + e2 x^{m−2} − …
    let coeffs: Vec<f64> = (0..=m).map(|j| if j % 2 == 0 { e[j] } else { -e[j] }).collect();
    let companion = DMatrix::from_fn(m, m, |r, c| {
        if r == 0 {
            -coeffs[c + 1]
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    let roots = companion.complex_eigenvalues();
    let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let mut eigenvalues = Vec::with_capacity(m);
    let mut complex = 0;
    for z in roots.iter() {
        let mut x = z.re;
        if z.im.abs() > 1e-9 * scale.max(1.0) {
            complex += 1;
        } else {
            for _ in 0..3 {
                let (v, d) = poly_eval(&coeffs, x);
                if d.abs() < 1e-300 || v == 0.0 {
                    break;
                }
                let step = v / d;
                if !step.is_finite() || step.abs() > 1e-6 {
                    break;
                }
                x -= step;
            }
        }
        eigenvalues.push(x);
    }
    if complex > 0 {
        notes.push(format!("{complex} complex root(s) projected to their real parts"));
    }
    let clamped = eigenvalues.iter().filter(|&&x| !(0.0..=1.0).contains(&x)).count();
    if clamped > 0 {
        notes.push(format!("{clamped} root(s) clamped to [0, 1]"));
    }
    for x in &mut eigenvalues {
        *x = x.clamp(0.0, 1.0);
    }
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Spectrum { eigenvalues, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn named_examples() {
        assert!(close(&newton_girard(&[1.0, 1.0]).eigenvalues, &[1.0, 0.0], 1e-12));
        assert!(close(&newton_girard(&[1.0, 0.5]).eigenvalues, &[0.5, 0.5], 1e-7));
        assert!(close(&newton_girard(&[1.0, 0.68]).eigenvalues, &[0.8, 0.2], 1e-9));
        assert!(newton_girard(&[1.0, 0.68]).notes.is_empty());
    }

    #[test]
    fn elementary_polynomials() {
        let e = elementary_symmetric(&[1.0, 0.68]);
        assert!(close(&e, &[1.0, 1.0, 0.16], 1e-15));
    }

    #[test]
    fn noisy_input_is_projected() {
        // Tr(ρ²) > 1 is unphysical; the quadratic has complex roots.
        let s = newton_girard(&[1.0, 1.2]);
        assert_eq!(s.eigenvalues.len(), 2);
        assert!(s.eigenvalues.iter().all(|x| (0.0..=1.0).contains(x)));
        assert!(!s.notes.is_empty());
    }

    proptest! {
        #[test]
        fn round_trip(mut spec in proptest::collection::vec(0.0f64..1.0, 1..5)) {
            let total: f64 = spec.iter().sum();
            prop_assume!(total > 1e-3);
            spec.iter_mut().for_each(|x| *x /= total);
            spec.sort_by(|a, b| b.total_cmp(a));
            // Keep roots separated so the conditioning is benign.
            prop_assume!(spec.windows(2).all(|w| w[0] - w[1] > 0.05));
            let got = newton_girard(&power_sums(&spec, spec.len())).eigenvalues;
            prop_assert!(close(&got, &spec, 1e-8), "{:?} vs {:?}", got, spec);
        }
    }
}
