//! One-way ANOVA and the Shapiro–Wilk normality test.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

use super::EvalError;

const BETA_MAX_ITER: usize = 200;
const BETA_EPS: f64 = 1e-15;
/// Largest sample the Shapiro–Wilk approximation is calibrated for.
pub const SHAPIRO_MAX_N: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Regularized incomplete beta `I_x(a, b)` by Lentz's continued fraction.
pub fn beta_inc_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    // the fraction converges fast for x < (a + 1) / (a + b + 2); use symmetry otherwise
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, 1.0 - x) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < BETA_EPS {
            break;
        }
    }
    h
}

/// Upper tail of the F distribution with `(d1, d2)` degrees of freedom.
pub fn f_upper_tail(f: f64, d1: f64, d2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    beta_inc_reg(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
}

/// Classical one-way ANOVA. With no variation at all the statistic is 0
/// and p = 1.
pub fn anova_oneway(groups: &[Vec<f64>]) -> Result<TestResult, EvalError> {
    if groups.len() < 2 {
        return Err(EvalError::Param(format!("ANOVA needs at least 2 groups, got {}", groups.len())));
    }
    if let Some(i) = groups.iter().position(|g| g.len() < 2) {
        return Err(EvalError::Param(format!("ANOVA group {i} has fewer than 2 values")));
    }
    if groups.iter().flatten().any(|v| !v.is_finite()) {
        return Err(EvalError::Param("ANOVA input contains non-finite values".into()));
    }
    let k = groups.len() as f64;
    let n: usize = groups.iter().map(Vec::len).sum();
    let grand = groups.iter().flatten().sum::<f64>() / n as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        ssb += g.len() as f64 * (m - grand).powi(2);
        ssw += g.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    }
    let (df_b, df_w) = (k - 1.0, n as f64 - k);
    // exact-zero checks treat rounding residue as variation; scale-relative tolerance instead
    let scale = groups.iter().flatten().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    let tiny = scale * 1e-24;
    let (ssb, ssw) = (if ssb <= tiny { 0.0 } else { ssb }, if ssw <= tiny { 0.0 } else { ssw });
    if ssw == 0.0 {
        return Ok(if ssb == 0.0 {
            TestResult {
                statistic: 0.0,
                p_value: 1.0,
            }
        } else {
            TestResult {
                statistic: f64::INFINITY,
                p_value: 0.0,
            }
        });
    }
    let f = (ssb / df_b) / (ssw / df_w);
    Ok(TestResult {
        statistic: f,
        p_value: f_upper_tail(f, df_b, df_w),
    })
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// Shapiro–Wilk W and p-value (Royston's approximation). Samples above
/// 5000 values are reduced to 5000 by evenly strided selection.
pub fn shapiro_wilk(sample: &[f64]) -> Result<TestResult, EvalError> {
    let n_in = sample.len();
    if n_in < 3 {
        return Err(EvalError::Param(format!("Shapiro-Wilk needs n >= 3, got {n_in}")));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(EvalError::Param("Shapiro-Wilk input contains non-finite values".into()));
    }
    let mut x: Vec<f64> = if n_in > SHAPIRO_MAX_N {
        (0..SHAPIRO_MAX_N).map(|i| sample[i * n_in / SHAPIRO_MAX_N]).collect()
    } else {
        sample.to_vec()
    };
    x.sort_by(f64::total_cmp);
    let n = x.len();
    let range = x[n - 1] - x[0];
    if range == 0.0 {
        return Err(EvalError::Param("Shapiro-Wilk is undefined for a constant sample".into()));
    }
    let a = sw_coefficients(n);
    // coefficient for sorted position i: antisymmetric around the centre
    let coef = |i: usize| {
        let j = n - 1 - i;
        if i < j {
            -a[i]
        } else if i > j {
            a[j]
        } else {
            0.0
        }
    };
    let xs: Vec<f64> = x.iter().map(|v| v / range).collect();
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_a = (0..n).map(coef).sum::<f64>() / n as f64;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, &v) in xs.iter().enumerate() {
        let da = coef(i) - mean_a;
        let dx = v - mean_x;
        ssa += da * da;
        ssx += dx * dx;
        sax += da * dx;
    }
    let root = (ssa * ssx).sqrt();
    // 1 - W computed directly keeps precision when W is close to 1
    let w1 = (root - sax) * (root + sax) / (ssa * ssx);
    let w = (1.0 - w1).clamp(0.0, 1.0);
    Ok(TestResult {
        statistic: w,
        p_value: sw_p_value(w, n),
    })
}

/// Half of the antisymmetric coefficient vector, for the lower order
/// statistics, as positive values (largest first).
fn sw_coefficients(n: usize) -> Vec<f64> {
    let nn2 = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let an = n as f64;
    let m: Vec<f64> = (1..=nn2)
        .map(|i| std_normal.inverse_cdf((i as f64 - 0.375) / (an + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
    const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;
    let mut a = vec![0.0; nn2];
    a[0] = a1;
    if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * m[0].powi(2) - 2.0 * m[1].powi(2)) / (1.0 - 2.0 * a1.powi(2) - 2.0 * a2.powi(2))).sqrt();
        a[1] = a2;
        for i in 2..nn2 {
            a[i] = -m[i] / fac;
        }
    } else {
        let fac = ((summ2 - 2.0 * m[0].powi(2)) / (1.0 - 2.0 * a1.powi(2))).sqrt();
        for i in 1..nn2 {
            a[i] = -m[i] / fac;
        }
    }
    a
}

fn sw_p_value(w: f64, n: usize) -> f64 {
    if w >= 1.0 {
        return 1.0;
    }
    if n == 3 {
        // exact distribution for n = 3
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = std::f64::consts::FRAC_PI_3;
        return (pi6 * (w.sqrt().asin() - stqr)).max(0.0);
    }
    let an = n as f64;
    let y = (1.0 - w).ln();
    let (y, m, s) = if n <= 11 {
        let gamma = poly(&[-2.273, 0.459], an);
        if y >= gamma {
            return 1e-99;
        }
        let y = -(gamma - y).ln();
        (y, poly(&[0.544, -0.39978, 0.025054, -6.714e-4], an), poly(&[1.3822, -0.77857, 0.062767, -0.0020322], an).exp())
    } else {
        let xx = an.ln();
        (y, poly(&[-1.5861, -0.31082, -0.083751, 0.0038915], xx), poly(&[-0.4803, -0.082676, 0.0030302], xx).exp())
    };
    Normal::new(m, s).map(|d| d.sf(y)).unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::FisherSnedecor;

    #[test]
    fn textbook_f() {
        let r = anova_oneway(&[vec![1.0, 2.0, 3.0], vec![2.0, 3.0, 4.0], vec![3.0, 4.0, 5.0]]).unwrap();
        assert!((r.statistic - 3.0).abs() < 1e-9);
        let oracle = 1.0 - FisherSnedecor::new(2.0, 6.0).unwrap().cdf(3.0);
        assert!((r.p_value - oracle).abs() < 1e-10, "{} vs {oracle}", r.p_value);
    }

    #[test]
    fn identical_groups() {
        let g = vec![1.0, 2.0, 3.0];
        let r = anova_oneway(&[g.clone(), g.clone(), g]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_groups() {
        let r = anova_oneway(&[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        let r = anova_oneway(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(r.p_value, 0.0);
        assert!(anova_oneway(&[vec![1.0, 2.0]]).is_err());
        assert!(anova_oneway(&[vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn incomplete_beta_against_statrs() {
        for &(a, b) in &[(0.5, 0.5), (1.0, 3.0), (2.5, 7.0), (30.0, 2.0), (150.0, 400.0)] {
            for i in 1..20 {
                let x = i as f64 / 20.0;
                let ours = beta_inc_reg(a, b, x);
                let theirs = statrs::function::beta::beta_reg(a, b, x);
                assert!((ours - theirs).abs() < 1e-10, "I_{x}({a},{b}): {ours} vs {theirs}");
            }
        }
    }

    #[test]
    fn shapiro_known_values() {
        // reference values from scipy.stats.shapiro (same algorithm)
        let cases: [(&[f64], f64, f64); 4] = [
            (&[148.0, 154.0, 158.0, 160.0, 161.0, 162.0, 166.0, 170.0, 182.0, 195.0, 236.0], 0.7888146948631716, 0.006703814061898823),
            (&[1.0, 2.0, 4.0], 0.9642857142857142, 0.6368868450289689),
            (&[1.0, 2.0, 3.0, 5.0, 8.0], 0.9385500656529824, 0.6557061065668559),
            (&[0.0, 1.0, 4.0, 9.0, 16.0, 25.0, 36.0, 49.0, 64.0, 81.0, 100.0, 121.0, 144.0, 169.0, 196.0, 225.0, 256.0, 289.0, 324.0, 361.0], 0.8949288620307665, 0.03316539297687834),
        ];
        for (x, w, p) in cases {
            let r = shapiro_wilk(x).unwrap();
            // scipy evaluates in single precision
            assert!((r.statistic - w).abs() < 1e-5, "W {} vs {w}", r.statistic);
            assert!((r.p_value - p).abs() < 1e-4 * p.max(0.01), "p {} vs {p}", r.p_value);
        }
        let r = shapiro_wilk(&[1.0, 2.0, 3.0]).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn shapiro_errors() {
        assert!(shapiro_wilk(&[1.0, 2.0]).is_err());
        assert!(shapiro_wilk(&[4.0; 10]).is_err());
    }
}
