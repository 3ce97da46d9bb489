//! Grid scans over `(alpha, n, x_tilde)` comparing every evaluation route
//! with the piecewise state.
//!
//! Each cell is evaluated independently; a failing method is recorded in its
//! row and the scan carries on. Rows are returned sorted by `alpha`, then
//! `n`, then `x_tilde`, whatever order the cells finished in.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::contour::contour_evaluate;
use crate::parallel::{map_ordered, Execution};
use crate::quadrature::{direct_integral, DirectMethod, ToleranceSpec};
use crate::well::{piecewise_state, validate_alpha, ScaledPosition, StateIndex, WellConfig};
use crate::{Error, Result, SCHEMA_VERSION, TOOL_VERSION};

/// Requested boundary points `x_tilde = +-1` move inward by this much.
pub const BOUNDARY_SHIFT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DirectTail,
    DirectAbel,
    Contour,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::DirectTail, Method::DirectAbel, Method::Contour];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::DirectTail => "direct-tail",
            Method::DirectAbel => "direct-abel",
            Method::Contour => "contour",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.as_str() == s.trim()).ok_or_else(|| {
            Error::InvalidSpec(format!(
                "unknown method `{s}` (expected direct-tail, direct-abel or contour)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub alphas: Vec<f64>,
    pub x_tildes: Vec<f64>,
    pub ns: Vec<StateIndex>,
    pub methods: Vec<Method>,
    pub tol: ToleranceSpec,
    /// Physical constants; its own `alpha` is replaced per cell.
    pub well: WellConfig,
}

impl Default for ScanSpec {
    /// Default grid, all methods, nondimensional well.
    fn default() -> Self {
        Self {
            alphas: vec![1.25, 1.5, 1.75, 2.0],
            x_tildes: vec![0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.5, -1.5, 2.5, -2.5],
            ns: (1..=3).map(|k| StateIndex::new(k).expect("positive")).collect(),
            methods: Method::ALL.to_vec(),
            tol: ToleranceSpec::default(),
            well: WellConfig::nondimensional(2.0).expect("valid"),
        }
    }
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        let empty = |name: &str| Error::InvalidSpec(format!("`{name}` must not be empty"));
        if self.alphas.is_empty() {
            return Err(empty("alphas"));
        }
        if self.x_tildes.is_empty() {
            return Err(empty("x_tildes"));
        }
        if self.ns.is_empty() {
            return Err(empty("ns"));
        }
        if self.methods.is_empty() {
            return Err(empty("methods"));
        }
        for &alpha in &self.alphas {
            validate_alpha(alpha)?;
        }
        for &x in &self.x_tildes {
            ScaledPosition::new(x)?;
        }
        self.tol.validate()?;
        if has_duplicates(&self.alphas) || has_duplicates(&self.x_tildes) {
            return Err(Error::InvalidSpec("duplicate grid values".into()));
        }
        let mut ns = self.ns.clone();
        ns.sort();
        ns.dedup();
        let mut methods = self.methods.clone();
        methods.sort();
        methods.dedup();
        if ns.len() != self.ns.len() || methods.len() != self.methods.len() {
            return Err(Error::InvalidSpec("duplicate states or methods".into()));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.alphas.len() * self.x_tildes.len() * self.ns.len()
    }

    pub fn requests(&self, method: Method) -> bool {
        self.methods.contains(&method)
    }

    /// Line-oriented description of every input that affects the rows; its
    /// SHA-256 is the report's config hash.
    pub fn canonical(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut methods = self.methods.clone();
        methods.sort();
        format!(
            "alphas={}\nx_tildes={}\nns={}\nmethods={}\na={}\nhbar={}\nd_alpha={}\namplitude={}\nabs_tol={}\nrel_tol={}\nmax_evaluations={}\n",
            join(&self.alphas),
            join(&self.x_tildes),
            self.ns.iter().map(|n| n.get().to_string()).collect::<Vec<_>>().join(","),
            methods.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(","),
            self.well.a(),
            self.well.hbar(),
            self.well.d_alpha(),
            self.well.amplitude(),
            self.tol.abs_tol,
            self.tol.rel_tol,
            self.tol.max_evaluations,
        )
    }

    pub fn config_hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn has_duplicates(values: &[f64]) -> bool {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).any(|w| w[0] == w[1])
}

/// Moves `+-1` to `+-(1 - BOUNDARY_SHIFT)`; other values pass through.
pub fn shift_off_boundary(x_tilde: f64) -> (f64, Option<String>) {
    if x_tilde.abs() == 1.0 {
        let shifted = x_tilde.signum() * (1.0 - BOUNDARY_SHIFT);
        (shifted, Some(format!("boundary-shift {x_tilde}->{shifted}")))
    } else {
        (x_tilde, None)
    }
}

/// One method's outcome in a cell. A method that raised an error has a NaN
/// value, `converged = false`, and the message in `failure`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
    pub wall_time: f64,
    pub failure: Option<String>,
}

impl MethodValue {
    fn failed(message: String, wall_time: f64) -> Self {
        Self {
            value: Complex64::new(f64::NAN, f64::NAN),
            error_estimate: f64::NAN,
            evaluations: 0,
            converged: false,
            wall_time,
            failure: Some(message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyRow {
    pub alpha: f64,
    pub n: StateIndex,
    /// Evaluated position, after any boundary shift.
    pub x_tilde: f64,
    pub requested_x_tilde: f64,
    pub piecewise: f64,
    pub direct_tail: Option<MethodValue>,
    pub direct_abel: Option<MethodValue>,
    pub contour: Option<MethodValue>,
    /// Half-residue part of the contour total.
    pub contour_residue: Option<Complex64>,
    pub contour_cut: Option<Complex64>,
    pub annotations: Vec<String>,
}

impl ConsistencyRow {
    pub fn method(&self, method: Method) -> Option<&MethodValue> {
        match method {
            Method::DirectTail => self.direct_tail.as_ref(),
            Method::DirectAbel => self.direct_abel.as_ref(),
            Method::Contour => self.contour.as_ref(),
        }
    }

    /// `Re(value) - piecewise`.
    pub fn delta(&self, method: Method) -> Option<f64> {
        self.method(method).map(|m| m.value.re - self.piecewise)
    }

    pub fn failed(&self) -> bool {
        Method::ALL.iter().filter_map(|&m| self.method(m)).any(|m| !m.converged)
    }

    /// Largest pairwise `|v_i - v_j|` among the evaluated methods.
    pub fn max_disagreement(&self) -> Option<f64> {
        let values: Vec<Complex64> = Method::ALL
            .iter()
            .filter_map(|&m| self.method(m))
            .map(|m| m.value)
            .collect();
        if values.len() < 2 {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                worst = worst.max((a - b).norm());
            }
        }
        Some(worst)
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.alpha
            .total_cmp(&other.alpha)
            .then(self.n.cmp(&other.n))
            .then(self.x_tilde.total_cmp(&other.x_tilde))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub alpha: f64,
    pub method: Method,
    pub evaluated: usize,
    pub failures: usize,
    /// Over converged cells; `None` when there are none.
    pub max_abs_delta: Option<f64>,
    pub median_abs_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisagreementSummary {
    pub alpha: f64,
    /// Over cells where every requested method converged.
    pub max_cross_method: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub methods: Vec<MethodSummary>,
    pub disagreement: Vec<DisagreementSummary>,
    pub failed_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub schema_version: String,
    pub timestamp_unix: u64,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub spec: ScanSpec,
    pub rows: Vec<ConsistencyRow>,
    pub summary: Summary,
    pub provenance: Provenance,
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    })
}

/// Per-`(alpha, method)` statistics, recomputed from rows alone.
pub fn summarize(rows: &[ConsistencyRow]) -> Summary {
    let mut alphas: Vec<f64> = rows.iter().map(|r| r.alpha).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();

    let mut methods = Vec::new();
    let mut disagreement = Vec::new();
    for &alpha in &alphas {
        let slice: Vec<&ConsistencyRow> = rows.iter().filter(|r| r.alpha == alpha).collect();
        for method in Method::ALL {
            let evaluated: Vec<&MethodValue> = slice.iter().filter_map(|r| r.method(method)).collect();
            if evaluated.is_empty() {
                continue;
            }
            let mut deltas: Vec<f64> = slice
                .iter()
                .filter(|r| r.method(method).is_some_and(|m| m.converged))
                .filter_map(|r| r.delta(method))
                .map(f64::abs)
                .collect();
            methods.push(MethodSummary {
                alpha,
                method,
                evaluated: evaluated.len(),
                failures: evaluated.iter().filter(|m| !m.converged).count(),
                max_abs_delta: deltas.iter().copied().reduce(f64::max),
                median_abs_delta: median(&mut deltas),
            });
        }
        disagreement.push(DisagreementSummary {
            alpha,
            max_cross_method: slice
                .iter()
                .filter(|r| !r.failed())
                .filter_map(|r| r.max_disagreement())
                .reduce(f64::max),
        });
    }
    Summary {
        methods,
        disagreement,
        failed_cells: rows.iter().filter(|r| r.failed()).count(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn evaluate_direct(
    cfg: &WellConfig,
    n: StateIndex,
    x: ScaledPosition,
    method: DirectMethod,
    tol: &ToleranceSpec,
) -> MethodValue {
    let (result, wall_time) = timed(|| direct_integral(cfg, n, x, method, tol));
    match result {
        Ok(r) => MethodValue {
            value: r.value,
            error_estimate: r.abs_error_estimate,
            evaluations: r.evaluations,
            converged: r.converged,
            wall_time,
            failure: None,
        },
        Err(e) => MethodValue::failed(e.to_string(), wall_time),
    }
}

/// Evaluates one cell with every method requested by `spec`.
pub fn evaluate_cell(spec: &ScanSpec, alpha: f64, n: StateIndex, requested_x_tilde: f64) -> Result<ConsistencyRow> {
    let cfg = spec.well.with_alpha(alpha)?;
    let (x_tilde, shift_note) = shift_off_boundary(requested_x_tilde);
    let position = ScaledPosition::new(x_tilde)?;
    let mut row = ConsistencyRow {
        alpha,
        n,
        x_tilde,
        requested_x_tilde,
        piecewise: piecewise_state(&cfg, n, x_tilde * cfg.a()),
        direct_tail: None,
        direct_abel: None,
        contour: None,
        contour_residue: None,
        contour_cut: None,
        annotations: shift_note.into_iter().collect(),
    };
    if spec.requests(Method::DirectTail) {
        row.direct_tail = Some(evaluate_direct(
            &cfg,
            n,
            position,
            DirectMethod::TailAcceleration,
            &spec.tol,
        ));
    }
    if spec.requests(Method::DirectAbel) {
        row.direct_abel = Some(evaluate_direct(&cfg, n, position, DirectMethod::AbelLadder, &spec.tol));
    }
    if spec.requests(Method::Contour) {
        let (result, wall_time) = timed(|| contour_evaluate(&cfg, n, position, &spec.tol));
        row.contour = Some(match result {
            Ok(e) => {
                row.contour_residue = Some(e.half_residue_sum);
                row.contour_cut = Some(e.cut_sum);
                MethodValue {
                    value: e.total,
                    error_estimate: e.abs_error_estimate,
                    evaluations: e.evaluations,
                    converged: e.converged,
                    wall_time,
                    failure: None,
                }
            }
            Err(e) => MethodValue::failed(e.to_string(), wall_time),
        });
    }
    for method in Method::ALL {
        if let Some(failure) = row.method(method).and_then(|m| m.failure.clone()) {
            row.annotations.push(format!("{method}: {failure}"));
        } else if row.method(method).is_some_and(|m| !m.converged) {
            row.annotations.push(format!("{method}: not converged"));
        }
    }
    Ok(row)
}

pub fn run_scan(spec: &ScanSpec) -> Result<ConsistencyReport> {
    run_scan_with(spec, Execution::default())
}

pub fn run_scan_with(spec: &ScanSpec, execution: Execution) -> Result<ConsistencyReport> {
    spec.validate()?;
    let mut cells = Vec::with_capacity(spec.cell_count());
    for &alpha in &spec.alphas {
        for &n in &spec.ns {
            for &x in &spec.x_tildes {
                cells.push((alpha, n, x));
            }
        }
    }
    let mut rows = map_ordered(&cells, execution, |&(alpha, n, x)| evaluate_cell(spec, alpha, n, x))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(ConsistencyRow::sort_key);
    let summary = summarize(&rows);
    let timestamp_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(ConsistencyReport {
        spec: spec.clone(),
        rows,
        summary,
        provenance: Provenance {
            tool_version: TOOL_VERSION.into(),
            schema_version: SCHEMA_VERSION.into(),
            timestamp_unix,
            config_hash: spec.config_hash(),
        },
    })
}
