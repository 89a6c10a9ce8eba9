use serde::{Deserialize, Serialize};

use projheat::exactnum::{half, serde_rational_vec, to_exact_string};
use projheat::extended::remainder_table;
use projheat::heat::{heat_kernel_integral, heat_kernel_series, QuadratureConfig};
use projheat::heatcoeff::HeatCoeffTable;
use projheat::kernels::{fs_distance, reproducing_kernel};
use projheat::spectrum::{
    decompose_multiplicity, dimension_gamma_form, dimension_product_form, dimension_sum_form, eigenvalue_beta,
    DecompositionPoly, Parity, SpectralPoint,
};
use projheat::Rational;

use crate::args::{
    parse_point, validate_eps, validate_times, Cli, CoeffsArgs, Command, DecompArgs, DimsArgs, HeatEvalArgs,
    KernelArgs, Method, TraceCompareArgs,
};
use crate::error::CliError;
use crate::output::{emit, fmt_f64, fmt_opt, render, CValue, Tabular};
use crate::verify;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Coeffs(a) => finish(&coeffs(a)?, a.common.format, a.common.output.as_deref()),
        Command::Dims(a) => {
            let out = dims(a)?;
            finish(&out, a.common.format, a.common.output.as_deref())?;
            match out.rows.iter().find(|r| !r.agree) {
                Some(r) => Err(CliError::Verification(format!("closed forms disagree at m = {}", r.m))),
                None => Ok(()),
            }
        }
        Command::Decomp(a) => finish(&decomp(a)?, a.common.format, a.common.output.as_deref()),
        Command::Kernel(a) => finish(&kernel(a)?, a.common.format, a.common.output.as_deref()),
        Command::HeatEval(a) => finish(&heat_eval(a)?, a.common.format, a.common.output.as_deref()),
        Command::TraceCompare(a) => finish(&trace_compare(a)?, a.common.format, a.common.output.as_deref()),
        Command::Verify(a) => {
            let report = verify::run(a.scope, a.nmax)?;
            finish(&report, a.format, a.output.as_deref())?;
            let failed = report.failures();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed.join("; ")))
            }
        }
    }
}

fn finish<T: Serialize + Tabular>(
    value: &T,
    format: crate::args::Format,
    output: Option<&std::path::Path>,
) -> Result<(), CliError> {
    emit(&render(value, format)?, output)
}

pub fn coeffs(a: &CoeffsArgs) -> Result<HeatCoeffTable, CliError> {
    let two_nu = a.common.validate()?;
    Ok(HeatCoeffTable::compute(a.common.n, two_nu, a.j)?)
}

impl Tabular for HeatCoeffTable {
    fn header(&self) -> Vec<&'static str> {
        vec!["quantity", "index", "value", "piPower", "printed"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            rows.push(vec!["c".into(), i.to_string(), to_exact_string(c), String::new(), String::new()]);
        }
        for (j, b) in self.b.iter().enumerate() {
            rows.push(vec!["b".into(), j.to_string(), to_exact_string(&b.factor), b.pi_power.to_string(), String::new()]);
        }
        for d in &self.paper_reported_diffs {
            rows.push(vec![
                format!("diff:{}", d.quantity),
                d.index.to_string(),
                to_exact_string(&d.computed),
                String::new(),
                to_exact_string(&d.printed),
            ]);
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimRow {
    pub m: u64,
    /// Exact integer, as a string.
    pub dimension: String,
    /// Eigenvalue `beta_m`, exact rational string.
    pub beta: String,
    /// Gamma, product and sum forms coincide.
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimsOutput {
    pub n: u32,
    #[serde(rename = "twoNu")]
    pub two_nu: u32,
    pub rows: Vec<DimRow>,
}

pub fn dims(a: &DimsArgs) -> Result<DimsOutput, CliError> {
    let two_nu = a.common.validate()?;
    let n = a.common.n;
    let poly = decompose_multiplicity(n, &half(two_nu));
    let mut rows = Vec::new();
    for m in 0..=a.m {
        let pt = SpectralPoint::new(n, two_nu, m)?;
        let g = dimension_gamma_form(&pt)?;
        let agree = dimension_product_form(&pt)? == g && dimension_sum_form(&pt, &poly)? == g;
        rows.push(DimRow { m, dimension: g.to_string(), beta: to_exact_string(&eigenvalue_beta(&pt)), agree });
    }
    Ok(DimsOutput { n, two_nu, rows })
}

impl Tabular for DimsOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["m", "dimension", "beta", "agree"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.m.to_string(), r.dimension.clone(), r.beta.clone(), r.agree.to_string()])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompOutput {
    pub n: u32,
    #[serde(rename = "twoNu")]
    pub two_nu: u32,
    pub parity: Parity,
    #[serde(with = "serde_rational_vec")]
    pub coeffs: Vec<Rational>,
    /// Nonnegative roots `mu` forced by the product form.
    #[serde(rename = "interiorRoots", with = "serde_rational_vec")]
    pub interior_roots: Vec<Rational>,
}

pub fn decomp(a: &DecompArgs) -> Result<DecompOutput, CliError> {
    let two_nu = a.common.validate()?;
    let nu = half(two_nu);
    let DecompositionPoly { parity, coeffs } = decompose_multiplicity(a.common.n, &nu);
    let interior_roots = DecompositionPoly::interior_roots(a.common.n, &nu);
    Ok(DecompOutput { n: a.common.n, two_nu, parity, coeffs, interior_roots })
}

impl Tabular for DecompOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["quantity", "index", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let name = match self.parity {
            Parity::Odd => "gamma",
            Parity::Even => "tau",
        };
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| vec![name.into(), i.to_string(), to_exact_string(c)]);
        let roots = self
            .interior_roots
            .iter()
            .enumerate()
            .map(|(i, r)| vec!["root".into(), i.to_string(), to_exact_string(r)]);
        coeffs.chain(roots).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelOutput {
    pub n: u32,
    #[serde(rename = "twoNu")]
    pub two_nu: u32,
    pub m: u64,
    pub z: Vec<CValue>,
    pub w: Vec<CValue>,
    pub distance: f64,
    pub value: CValue,
}

pub fn kernel(a: &KernelArgs) -> Result<KernelOutput, CliError> {
    let two_nu = a.common.validate()?;
    let n = a.common.n;
    let z = parse_point(&a.z, n)?;
    let w = parse_point(&a.w, n)?;
    let k = reproducing_kernel(n, two_nu, a.m, &z, &w)?;
    Ok(KernelOutput {
        n,
        two_nu,
        m: a.m,
        distance: fs_distance(&z, &w)?,
        z: z.coords.iter().map(|&c| c.into()).collect(),
        w: w.coords.iter().map(|&c| c.into()).collect(),
        value: k.value.into(),
    })
}

impl Tabular for KernelOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["m", "distance", "re", "im"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.m.to_string(), fmt_f64(self.distance), fmt_f64(self.value.re), fmt_f64(self.value.im)]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatRow {
    pub t: f64,
    pub series: Option<CValue>,
    #[serde(rename = "seriesTerms")]
    pub series_terms: Option<usize>,
    #[serde(rename = "seriesTailBound")]
    pub series_tail_bound: Option<f64>,
    pub integral: Option<CValue>,
    #[serde(rename = "integralErrorEstimate")]
    pub integral_error: Option<f64>,
    /// `|series - integral| / (1 + |series|)` when both are computed.
    #[serde(rename = "relDiff")]
    pub rel_diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatEvalOutput {
    pub n: u32,
    #[serde(rename = "twoNu")]
    pub two_nu: u32,
    pub z: Vec<CValue>,
    pub w: Vec<CValue>,
    pub distance: f64,
    pub rows: Vec<HeatRow>,
}

pub fn heat_eval(a: &HeatEvalArgs) -> Result<HeatEvalOutput, CliError> {
    let two_nu = a.common.validate()?;
    validate_times(&a.t)?;
    validate_eps(a.eps)?;
    let n = a.common.n;
    let z = parse_point(&a.z, n)?;
    let w = parse_point(&a.w, n)?;
    let cfg = QuadratureConfig { nodes: a.points, max_nodes: a.points.max(1024), ..QuadratureConfig::default() };
    let mut rows = Vec::new();
    for &t in &a.t {
        let series = match a.method {
            Method::Integral => None,
            _ => Some(heat_kernel_series(n, two_nu, t, &z, &w, a.eps)?),
        };
        let integral = match a.method {
            Method::Series => None,
            _ => Some(heat_kernel_integral(n, two_nu, t, &z, &w, &cfg)?),
        };
        let rel_diff = match (&series, &integral) {
            (Some(s), Some(i)) => Some((s.value - i.value).norm() / (1.0 + s.value.norm())),
            _ => None,
        };
        rows.push(HeatRow {
            t,
            series: series.map(|s| s.value.into()),
            series_terms: series.map(|s| s.terms_used),
            series_tail_bound: series.map(|s| s.error_bound),
            integral: integral.map(|i| i.value.into()),
            integral_error: integral.map(|i| i.error_bound),
            rel_diff,
        });
    }
    Ok(HeatEvalOutput {
        n,
        two_nu,
        distance: fs_distance(&z, &w)?,
        z: z.coords.iter().map(|&c| c.into()).collect(),
        w: w.coords.iter().map(|&c| c.into()).collect(),
        rows,
    })
}

impl Tabular for HeatEvalOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["t", "seriesRe", "seriesIm", "seriesTerms", "seriesTailBound", "integralRe", "integralIm", "integralErrorEstimate", "relDiff"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    fmt_f64(r.t),
                    fmt_opt(r.series.map(|c| c.re)),
                    fmt_opt(r.series.map(|c| c.im)),
                    r.series_terms.map(|k| k.to_string()).unwrap_or_default(),
                    fmt_opt(r.series_tail_bound),
                    fmt_opt(r.integral.map(|c| c.re)),
                    fmt_opt(r.integral.map(|c| c.im)),
                    fmt_opt(r.integral_error),
                    fmt_opt(r.rel_diff),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub direct: f64,
    pub asymptotic: f64,
    #[serde(rename = "absErr")]
    pub abs_err: f64,
    /// `absErr (4 pi t)^n / t^{J+1}`, roughly constant when the truncation has order `t^{J+1}`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCompareOutput {
    pub n: u32,
    #[serde(rename = "twoNu")]
    pub two_nu: u32,
    #[serde(rename = "J")]
    pub j_max: usize,
    pub rows: Vec<TraceRow>,
}

pub fn trace_compare(a: &TraceCompareArgs) -> Result<TraceCompareOutput, CliError> {
    let two_nu = a.common.validate()?;
    validate_times(&a.t)?;
    let rows = remainder_table(a.common.n, two_nu, a.j, &a.t)?
        .into_iter()
        .map(|r| TraceRow { t: r.t, direct: r.direct, asymptotic: r.asymptotic, abs_err: r.abs_err, scaled: r.scaled })
        .collect();
    Ok(TraceCompareOutput { n: a.common.n, two_nu, j_max: a.j, rows })
}

impl Tabular for TraceCompareOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["t", "direct", "asymptotic", "absErr", "scaled"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![fmt_f64(r.t), fmt_f64(r.direct), fmt_f64(r.asymptotic), fmt_f64(r.abs_err), fmt_f64(r.scaled)])
            .collect()
    }
}
