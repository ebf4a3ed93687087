//! Deterministic text output.
//!
//! Every float is rendered with 17 significant digits (`{:.16e}`), which
//! round-trips f64 exactly, so reruns of the same configuration produce
//! byte-identical tables. Absent values print as `nan`.
//!
//! CSV layouts:
//!
//! - diagnostics: `t,l2,hs,xs,linf,w1inf,weighted,gronwall_integrand`
//! - ratio reports: `kind,params,seed,lhs,rhs,ratio`; after each report's
//!   sample rows one summary row follows with `summary` in the seed
//!   column, the maximal ratio in the lhs column, and the refinement
//!   ratio in the rhs column
//! - decay series: `t,value`; decay fits: `label,t_lo,t_hi,exponent,amplitude,r_squared`
//! - J table: `t,j,closed_form` (closed form only for p = 2)
//! - scattering: `t,increment,distance`; row `k` holds the Cauchy
//!   increment of the gap ending at `t_k` (first row `nan`)

use crate::diagnostics::DecayFit;
use crate::evolution::SnapRecord;
use crate::harness::RatioReport;
use crate::scattering::ScatterRecord;

/// Render a float with 17 significant digits; `f64 -> text -> f64` is
/// the identity on finite values.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// 64-bit FNV-1a hash; used to fingerprint configurations in manifests.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn diagnostics_csv(records: &[SnapRecord]) -> String {
    let mut out = String::from("t,l2,hs,xs,linf,w1inf,weighted,gronwall_integrand\n");
    for r in records {
        let xs = r.xs.map(fmt_g17).unwrap_or_else(|| "nan".to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_g17(r.t),
            fmt_g17(r.l2),
            fmt_g17(r.hs),
            xs,
            fmt_g17(r.linf),
            fmt_g17(r.w1inf),
            fmt_g17(r.weighted),
            fmt_g17(r.gronwall_integrand),
        ));
    }
    out
}

pub fn ratio_csv(reports: &[RatioReport]) -> String {
    let mut out = String::from("kind,params,seed,lhs,rhs,ratio\n");
    for report in reports {
        let params = report.params.label(report.kind);
        for s in &report.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                report.kind,
                params,
                s.seed,
                fmt_g17(s.lhs),
                fmt_g17(s.rhs),
                fmt_g17(s.ratio),
            ));
        }
        out.push_str(&format!(
            "{},{},summary,{},{},\n",
            report.kind,
            params,
            fmt_g17(report.max_ratio),
            fmt_g17(report.refinement_ratio),
        ));
    }
    out
}

pub fn decay_series_csv(series: &[(f64, f64)]) -> String {
    let mut out = String::from("t,value\n");
    for &(t, v) in series {
        out.push_str(&format!("{},{}\n", fmt_g17(t), fmt_g17(v)));
    }
    out
}

pub fn decay_fit_csv(fits: &[(String, DecayFit)]) -> String {
    let mut out = String::from("label,t_lo,t_hi,exponent,amplitude,r_squared\n");
    for (label, fit) in fits {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            label,
            fmt_g17(fit.window.0),
            fmt_g17(fit.window.1),
            fmt_g17(fit.exponent),
            fmt_g17(fit.amplitude),
            fmt_g17(fit.r_squared),
        ));
    }
    out
}

pub fn jtable_csv(rows: &[(f64, f64, Option<f64>)]) -> String {
    let mut out = String::from("t,j,closed_form\n");
    for &(t, j, closed) in rows {
        let c = closed.map(fmt_g17).unwrap_or_else(|| "nan".to_string());
        out.push_str(&format!("{},{},{}\n", fmt_g17(t), fmt_g17(j), c));
    }
    out
}

pub fn scatter_csv(record: &ScatterRecord) -> String {
    let mut out = String::from("t,increment,distance\n");
    for (k, &t) in record.times.iter().enumerate() {
        let inc = if k == 0 {
            "nan".to_string()
        } else {
            fmt_g17(record.cauchy_increments[k - 1])
        };
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_g17(t),
            inc,
            fmt_g17(record.distances[k]),
        ));
    }
    out
}
