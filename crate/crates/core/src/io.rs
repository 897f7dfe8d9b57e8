//! JSON and CSV formats.
//!
//! System JSON: `{"n", "m", "n_y", "A", "B", "C", "D", "pr_certified"}` with
//! row-major nested arrays. SLH JSON: `{"S_re", "S_im", "K_re", "K_im", "R"}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lqss::{build_from_slh, QuadratureModel, SlhParams};
use crate::network::FrequencyResponse;
use crate::numerics::{Complex64, ComplexMatrix, RealMatrix};
use crate::reduction::TruncationReport;

pub const CSV_HEADER: [&str; 5] = ["omega_rad_s", "mag_ch1", "phase_ch1_rad", "mag_ch2", "phase_ch2_rad"];

pub fn matrix_to_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Builds a `rows×cols` matrix; `cols` is only needed when `rows` is empty.
pub fn rows_to_matrix(rows: &[Vec<f64>], cols: usize, what: &str) -> Result<RealMatrix> {
    let c = rows.first().map_or(cols, |r| r.len());
    if rows.iter().any(|r| r.len() != c) {
        return Err(Error::InvalidInput(format!("{what}: ragged rows")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what}: non-finite entry")));
    }
    Ok(RealMatrix::from_fn(rows.len(), c, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemJson {
    pub n: usize,
    pub m: usize,
    pub n_y: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
    #[serde(default)]
    pub pr_certified: bool,
}

impl From<&QuadratureModel> for SystemJson {
    fn from(g: &QuadratureModel) -> Self {
        SystemJson {
            n: g.n,
            m: g.m,
            n_y: g.n_y,
            a: matrix_to_rows(&g.a),
            b: matrix_to_rows(&g.b),
            c: matrix_to_rows(&g.c),
            d: matrix_to_rows(&g.d),
            pr_certified: g.pr_certified,
        }
    }
}

impl SystemJson {
    pub fn to_model(&self) -> Result<QuadratureModel> {
        let (n2, m2) = (2 * self.n, 2 * self.m);
        let g = QuadratureModel::new(
            rows_to_matrix(&self.a, n2, "A")?,
            rows_to_matrix(&self.b, m2, "B")?,
            rows_to_matrix(&self.c, n2, "C")?,
            rows_to_matrix(&self.d, m2, "D")?,
        )?;
        if (g.n, g.m, g.n_y) != (self.n, self.m, self.n_y) {
            return Err(Error::DimensionMismatch(format!(
                "declared (n, m, n_y) = ({}, {}, {}) but matrices give ({}, {}, {})",
                self.n, self.m, self.n_y, g.n, g.m, g.n_y
            )));
        }
        Ok(QuadratureModel { pr_certified: self.pr_certified, ..g })
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlhJson {
    pub S_re: Vec<Vec<f64>>,
    pub S_im: Vec<Vec<f64>>,
    pub K_re: Vec<Vec<f64>>,
    pub K_im: Vec<Vec<f64>>,
    pub R: Vec<Vec<f64>>,
}

fn join_complex(re: &RealMatrix, im: &RealMatrix, what: &str) -> Result<ComplexMatrix> {
    if re.shape() != im.shape() {
        return Err(Error::DimensionMismatch(format!("{what}: real and imaginary parts differ in shape")));
    }
    Ok(ComplexMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)])))
}

impl From<&SlhParams> for SlhJson {
    fn from(p: &SlhParams) -> Self {
        SlhJson {
            S_re: matrix_to_rows(&p.s.map(|z| z.re)),
            S_im: matrix_to_rows(&p.s.map(|z| z.im)),
            K_re: matrix_to_rows(&p.k.map(|z| z.re)),
            K_im: matrix_to_rows(&p.k.map(|z| z.im)),
            R: matrix_to_rows(&p.r),
        }
    }
}

impl SlhJson {
    pub fn to_params(&self) -> Result<SlhParams> {
        let m = self.S_re.len();
        let n2 = self.R.len();
        let s = join_complex(&rows_to_matrix(&self.S_re, m, "S_re")?, &rows_to_matrix(&self.S_im, m, "S_im")?, "S")?;
        let k = join_complex(&rows_to_matrix(&self.K_re, n2, "K_re")?, &rows_to_matrix(&self.K_im, n2, "K_im")?, "K")?;
        SlhParams::new(s, k, rows_to_matrix(&self.R, n2, "R")?)
    }
}

pub fn system_to_json(g: &QuadratureModel) -> Value {
    serde_json::to_value(SystemJson::from(g)).unwrap_or(Value::Null)
}

/// Parses either schema; SLH input is converted with `build_from_slh`.
pub fn parse_system(text: &str) -> Result<QuadratureModel> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if v.get("S_re").is_some() {
        let s: SlhJson = serde_json::from_value(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
        return build_from_slh(&s.to_params()?);
    }
    let s: SystemJson = serde_json::from_value(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
    s.to_model()
}

/// A bare nested array, or an object holding one under `"P"` or `"matrix"`.
pub fn parse_matrix(text: &str) -> Result<RealMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let inner = match &v {
        Value::Array(_) => v.clone(),
        Value::Object(o) => o
            .get("P")
            .or_else(|| o.get("matrix"))
            .cloned()
            .ok_or_else(|| Error::InvalidInput("expected key \"P\" or \"matrix\"".into()))?,
        _ => return Err(Error::InvalidInput("expected a matrix".into())),
    };
    let rows: Vec<Vec<f64>> = serde_json::from_value(inner).map_err(|e| Error::InvalidInput(e.to_string()))?;
    rows_to_matrix(&rows, 0, "matrix")
}

pub fn report_to_json(r: &TruncationReport) -> Value {
    json!({
        "kept": r.kept,
        "nu": r.nu,
        "bound": r.bound,
        "exact_error": r.exact_error,
        "exact_error_omega": finite_or_null(r.exact_error_omega),
        "hinf_method": format!("{:?}", r.hinf_method),
        "hankel": r.hankel,
        "sigma_b": r.realization.sigma_b,
        "hurwitz_chain": r.hurwitz_chain,
        "reduced": system_to_json(&r.reduced),
    })
}

pub fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

/// Writes a response with 17 significant digits per value.
pub fn write_response_csv(path: &Path, resp: &FrequencyResponse) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    write_response(&mut w, resp)?;
    w.flush().map_err(csv_err)
}

pub fn response_csv_string(resp: &FrequencyResponse) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_response(&mut w, resp)?;
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

fn write_response<W: std::io::Write>(w: &mut csv::Writer<W>, resp: &FrequencyResponse) -> Result<()> {
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for k in 0..resp.omegas.len() {
        let row = [
            resp.omegas[k],
            resp.magnitude[0][k],
            resp.phase[0][k],
            resp.magnitude[1][k],
            resp.phase[1][k],
        ];
        w.write_record(row.iter().map(|x| format!("{x:.16e}"))).map_err(csv_err)?;
    }
    Ok(())
}

pub fn read_response_csv<R: std::io::Read>(reader: R) -> Result<FrequencyResponse> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers().map_err(csv_err)?.clone();
    if headers.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::InvalidInput(format!("unexpected CSV header {headers:?}")));
    }
    let mut out = FrequencyResponse { omegas: vec![], magnitude: [vec![], vec![]], phase: [vec![], vec![]] };
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(csv_err))
            .collect::<Result<_>>()?;
        out.omegas.push(v[0]);
        out.magnitude[0].push(v[1]);
        out.phase[0].push(v[2]);
        out.magnitude[1].push(v[3]);
        out.phase[1].push(v[4]);
    }
    Ok(out)
}
