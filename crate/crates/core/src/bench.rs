//! Benchmark registry: input preparation, timed workloads, outputs and the
//! oracle gate that validates an output against its inputs.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arr_kernels::{
    asm_scatter, cmck, cmck_order, mperm_fill, trmat, AsmPlan, CmckWork, MpermFill,
};
use crate::error::{Error, Result};
use crate::mat_io::{gen_tri_mesh, read_matrix_market, symmetrize_lower, TriMesh};
use crate::oracles;
use crate::ptr_kernels::{
    dsolve_into, jacit, lu_factor_for_dsolve, pcg, spmatmat_into, spmatvec_into, JacobiParams,
    PcgParams, PcgResult,
};
use crate::types::{CsrMatrix, DenseMatrix, LinkedRowMatrix, OrthoLinkedMatrix, Permutation};

/// Input name used by benchmarks that take no matrix.
pub const NO_MATRIX: &str = "none";

/// Mesh file looked up in the data directory for ASM.
pub const MESH_FILE: &str = "asm.mesh";

const INPUT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Pointer,
    Array,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Pointer => "pointer",
            Family::Array => "array",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Benchmark {
    Spmatvec,
    Spmatmat,
    Jacit,
    Dsolve,
    Pcg,
    Asm,
    Trmat,
    Cmck,
    Mperm,
}

impl Benchmark {
    pub const ALL: [Benchmark; 9] = [
        Benchmark::Spmatvec,
        Benchmark::Spmatmat,
        Benchmark::Jacit,
        Benchmark::Dsolve,
        Benchmark::Pcg,
        Benchmark::Asm,
        Benchmark::Trmat,
        Benchmark::Cmck,
        Benchmark::Mperm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Spmatvec => "SPMATVEC",
            Benchmark::Spmatmat => "SPMATMAT",
            Benchmark::Jacit => "JACIT",
            Benchmark::Dsolve => "DSOLVE",
            Benchmark::Pcg => "PCG",
            Benchmark::Asm => "ASM",
            Benchmark::Trmat => "TRMAT",
            Benchmark::Cmck => "CMcK",
            Benchmark::Mperm => "MPERM",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Benchmark::Spmatvec
            | Benchmark::Spmatmat
            | Benchmark::Jacit
            | Benchmark::Dsolve
            | Benchmark::Pcg => Family::Pointer,
            _ => Family::Array,
        }
    }

    /// False for benchmarks whose input is the generated mesh.
    pub fn takes_matrix(self) -> bool {
        self != Benchmark::Asm
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown benchmark {s:?}")))
    }
}

/// Work sizes that the source leaves open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchParams {
    pub jacobi_iterations: usize,
    pub pcg_iterations: usize,
    /// Dense columns multiplied by SPMATMAT.
    pub spmatmat_cols: usize,
    /// Cells per axis of the generated ASM mesh.
    pub mesh_cells: (usize, usize),
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            jacobi_iterations: 100,
            pcg_iterations: 100,
            spmatmat_cols: 8,
            mesh_cells: (50, 50),
        }
    }
}

/// Renders as `jacobi=100,pcg=100,cols=8,mesh=50x50`.
impl fmt::Display for BenchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "jacobi={},pcg={},cols={},mesh={}x{}",
            self.jacobi_iterations,
            self.pcg_iterations,
            self.spmatmat_cols,
            self.mesh_cells.0,
            self.mesh_cells.1
        )
    }
}

/// Parses the [`fmt::Display`] form; omitted keys keep their defaults.
impl FromStr for BenchParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = BenchParams::default();
        let bad = |what: &str| Error::Parameter(format!("bench parameter {what:?} invalid"));
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| bad(item))?;
            let count = |v: &str| {
                v.parse::<usize>()
                    .ok()
                    .filter(|&c| c > 0)
                    .ok_or_else(|| bad(item))
            };
            match key {
                "jacobi" => p.jacobi_iterations = count(value)?,
                "pcg" => p.pcg_iterations = count(value)?,
                "cols" => p.spmatmat_cols = count(value)?,
                "mesh" => {
                    let (x, y) = value.split_once('x').ok_or_else(|| bad(item))?;
                    p.mesh_cells = (count(x)?, count(y)?);
                }
                _ => return Err(bad(item)),
            }
        }
        Ok(p)
    }
}

/// Everything a benchmark reads, prepared before timing.
#[derive(Debug, Clone)]
pub struct BenchInputs {
    pub benchmark: Benchmark,
    pub params: BenchParams,
    /// The ingested matrix; absent for ASM.
    pub matrix: Option<CsrMatrix>,
    pub mesh: Option<TriMesh>,
    /// Vector operand or right-hand side, length n.
    pub vector: Vec<f64>,
    /// SPMATMAT operand, n rows, row-major.
    pub dense: Vec<f64>,
    /// Symmetrized pattern that CMcK orders.
    pub symmetric: Option<CsrMatrix>,
    /// MPERM relabeling.
    pub permutation: Option<Permutation>,
}

impl BenchInputs {
    pub fn for_matrix(benchmark: Benchmark, m: CsrMatrix, params: BenchParams) -> Result<Self> {
        if !benchmark.takes_matrix() {
            return Err(Error::Parameter(format!(
                "{benchmark} takes no matrix input"
            )));
        }
        m.require_square(benchmark.name())?;
        let n = m.n_rows();
        let mut rng = ChaCha8Rng::seed_from_u64(INPUT_SEED);
        let vector: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let dense = if benchmark == Benchmark::Spmatmat {
            (0..n * params.spmatmat_cols)
                .map(|_| rng.gen_range(-1.0..=1.0))
                .collect()
        } else {
            Vec::new()
        };
        let (symmetric, permutation) = match benchmark {
            Benchmark::Cmck => (Some(symmetrize_lower(&m)?), None),
            Benchmark::Mperm => (None, Some(cmck(&symmetrize_lower(&m)?)?)),
            _ => (None, None),
        };
        Ok(Self {
            benchmark,
            params,
            matrix: Some(m),
            mesh: None,
            vector,
            dense,
            symmetric,
            permutation,
        })
    }

    pub fn for_mesh(mesh: TriMesh, params: BenchParams) -> Self {
        Self {
            benchmark: Benchmark::Asm,
            params,
            matrix: None,
            mesh: Some(mesh),
            vector: Vec::new(),
            dense: Vec::new(),
            symmetric: None,
            permutation: None,
        }
    }

    /// Resolves `input` in `data_dir`: `<input>.mtx` for matrix benchmarks,
    /// the mesh file (or a generated mesh) for ASM with input `none`.
    pub fn load(
        benchmark: Benchmark,
        input: &str,
        data_dir: &Path,
        params: BenchParams,
    ) -> Result<Self> {
        if benchmark.takes_matrix() {
            if input == NO_MATRIX {
                return Err(Error::Parameter(format!(
                    "{benchmark} needs a matrix input"
                )));
            }
            let (m, _) = read_matrix_market(&data_dir.join(format!("{input}.mtx")))?;
            Self::for_matrix(benchmark, m, params)
        } else {
            if input != NO_MATRIX {
                return Err(Error::Parameter(format!(
                    "{benchmark} takes input {NO_MATRIX:?}, not {input:?}"
                )));
            }
            let path = data_dir.join(MESH_FILE);
            let mesh = if path.exists() {
                TriMesh::read(&path)?
            } else {
                gen_tri_mesh(params.mesh_cells.0, params.mesh_cells.1)?
            };
            Ok(Self::for_mesh(mesh, params))
        }
    }

    fn matrix(&self) -> Result<&CsrMatrix> {
        self.matrix
            .as_ref()
            .ok_or_else(|| Error::Parameter(format!("{} inputs carry no matrix", self.benchmark)))
    }

    fn mesh(&self) -> Result<&TriMesh> {
        self.mesh
            .as_ref()
            .ok_or_else(|| Error::Parameter("ASM inputs carry no mesh".into()))
    }
}

/// A benchmark's result, in a form that serializes deterministically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum KernelOutput {
    Vector(Vec<f64>),
    Dense {
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    },
    /// Final iterate and the one before it.
    Jacobi {
        previous: Vec<f64>,
        last: Vec<f64>,
        iterations: usize,
    },
    Pcg {
        x: Vec<f64>,
        iterations: usize,
        relative_residual: f64,
    },
    Csr(CsrMatrix),
    /// Forward map `old -> new`.
    Permutation(Vec<usize>),
    Permuted {
        matrix: CsrMatrix,
        rhs: Vec<f64>,
    },
}

impl KernelOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("kernel outputs serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parameter(format!("kernel output: {e}")))
    }

    /// Perturbs the output so that the oracle gate must reject it.
    pub fn corrupt(&mut self) {
        fn bump(v: &mut [f64]) {
            if let Some(x) = v.first_mut() {
                *x = *x * 2.0 + 1.0;
            }
        }
        match self {
            KernelOutput::Vector(v) => bump(v),
            KernelOutput::Dense { data, .. } => bump(data),
            KernelOutput::Jacobi { last, .. } => bump(last),
            KernelOutput::Pcg {
                relative_residual, ..
            } => *relative_residual = *relative_residual * 2.0 + 1.0,
            KernelOutput::Csr(m) => bump(m.values_mut()),
            KernelOutput::Permutation(p) => {
                if p.len() >= 2 {
                    p.swap(0, 1);
                } else if let Some(x) = p.first_mut() {
                    *x += 1;
                }
            }
            KernelOutput::Permuted { rhs, .. } => {
                if rhs.is_empty() {
                    rhs.push(0.0);
                } else {
                    bump(rhs);
                }
            }
        }
    }
}

/// Prepared kernel state. Construction does all setup; [`Workload::run`]
/// is the timed region.
pub enum Workload {
    Spmatvec {
        a: LinkedRowMatrix,
        x: Vec<f64>,
        y: Vec<f64>,
    },
    Spmatmat {
        a: LinkedRowMatrix,
        right: DenseMatrix,
        out: DenseMatrix,
    },
    Jacit {
        a: LinkedRowMatrix,
        b: Vec<f64>,
        x0: Vec<f64>,
        params: JacobiParams,
        x: Vec<f64>,
    },
    Dsolve {
        lu: OrthoLinkedMatrix,
        rhs: Vec<f64>,
        work: Vec<f64>,
        solution: Vec<f64>,
    },
    Pcg {
        a: LinkedRowMatrix,
        b: Vec<f64>,
        params: PcgParams,
        result: Option<PcgResult>,
    },
    Asm {
        plan: AsmPlan,
        mesh: TriMesh,
        values: Vec<f64>,
    },
    Trmat {
        m: CsrMatrix,
        result: Option<CsrMatrix>,
    },
    Cmck {
        m: CsrMatrix,
        work: CmckWork,
    },
    Mperm {
        m: CsrMatrix,
        p: Permutation,
        b: Vec<f64>,
        fill: Option<MpermFill>,
    },
}

impl Workload {
    pub fn prepare(inputs: &BenchInputs) -> Result<Self> {
        let p = &inputs.params;
        Ok(match inputs.benchmark {
            Benchmark::Spmatvec => {
                let a = LinkedRowMatrix::from_csr(inputs.matrix()?)?;
                let n = a.size();
                Workload::Spmatvec {
                    a,
                    x: inputs.vector.clone(),
                    y: vec![0.0; n],
                }
            }
            Benchmark::Spmatmat => {
                let a = LinkedRowMatrix::from_csr(inputs.matrix()?)?;
                let n = a.size();
                let k = p.spmatmat_cols;
                Workload::Spmatmat {
                    right: DenseMatrix::from_row_major(n, k, &inputs.dense)?,
                    out: DenseMatrix::zeros(n, k),
                    a,
                }
            }
            Benchmark::Jacit => {
                let a = LinkedRowMatrix::from_csr(inputs.matrix()?)?;
                let n = a.size();
                Workload::Jacit {
                    a,
                    b: inputs.vector.clone(),
                    x0: vec![0.0; n],
                    params: JacobiParams {
                        iterations: p.jacobi_iterations,
                        record_residual: false,
                    },
                    x: Vec::new(),
                }
            }
            Benchmark::Dsolve => {
                let lu = lu_factor_for_dsolve(inputs.matrix()?)?;
                let n = lu.size();
                Workload::Dsolve {
                    lu,
                    rhs: inputs.vector.clone(),
                    work: vec![0.0; n],
                    solution: vec![0.0; n],
                }
            }
            Benchmark::Pcg => Workload::Pcg {
                a: LinkedRowMatrix::from_csr(inputs.matrix()?)?,
                b: inputs.vector.clone(),
                params: PcgParams {
                    max_iterations: p.pcg_iterations,
                    tolerance: f64::MIN_POSITIVE,
                },
                result: None,
            },
            Benchmark::Asm => {
                let mesh = inputs.mesh()?.clone();
                let plan = AsmPlan::new(&mesh);
                Workload::Asm {
                    values: vec![0.0; plan.nnz()],
                    plan,
                    mesh,
                }
            }
            Benchmark::Trmat => Workload::Trmat {
                m: inputs.matrix()?.clone(),
                result: None,
            },
            Benchmark::Cmck => {
                let m = inputs.symmetric.clone().ok_or_else(|| {
                    Error::Parameter("CMcK inputs lack the symmetric pattern".into())
                })?;
                let work = CmckWork::new(&m);
                Workload::Cmck { m, work }
            }
            Benchmark::Mperm => Workload::Mperm {
                m: inputs.matrix()?.clone(),
                p: inputs
                    .permutation
                    .clone()
                    .ok_or_else(|| Error::Parameter("MPERM inputs lack a permutation".into()))?,
                b: inputs.vector.clone(),
                fill: None,
            },
        })
    }

    /// One timed kernel invocation.
    pub fn run(&mut self) -> Result<()> {
        match self {
            Workload::Spmatvec { a, x, y } => spmatvec_into(a, x, y),
            Workload::Spmatmat { a, right, out } => spmatmat_into(a, right, out),
            Workload::Jacit {
                a,
                b,
                x0,
                params,
                x,
            } => *x = jacit(a, b, x0, params)?.x,
            Workload::Dsolve {
                lu,
                rhs,
                work,
                solution,
            } => dsolve_into(lu, rhs, work, solution)?,
            Workload::Pcg {
                a,
                b,
                params,
                result,
            } => *result = Some(pcg(a, b, params)?),
            Workload::Asm { plan, mesh, values } => asm_scatter(plan, mesh, values)?,
            Workload::Trmat { m, result } => *result = Some(trmat(m)),
            Workload::Cmck { m, work } => {
                work.labeled.fill(false);
                work.order.clear();
                work.head = 0;
                cmck_order(m, work);
            }
            Workload::Mperm { m, p, b, fill } => *fill = Some(mperm_fill(m, p, b)),
        }
        Ok(())
    }

    /// The result of the last run. Untimed post-processing (row sorting,
    /// the penultimate Jacobi iterate) happens here.
    pub fn output(&self) -> Result<KernelOutput> {
        let not_run = || Error::Precondition("workload has not run".into());
        Ok(match self {
            Workload::Spmatvec { y, .. } => KernelOutput::Vector(y.clone()),
            Workload::Spmatmat { out, .. } => KernelOutput::Dense {
                rows: out.n_rows(),
                cols: out.n_cols(),
                data: out.to_row_major(),
            },
            Workload::Jacit {
                a,
                b,
                x0,
                params,
                x,
            } => {
                if x.is_empty() && !x0.is_empty() {
                    return Err(not_run());
                }
                let previous = if params.iterations > 1 {
                    let earlier = JacobiParams {
                        iterations: params.iterations - 1,
                        record_residual: false,
                    };
                    jacit(a, b, x0, &earlier)?.x
                } else {
                    x0.clone()
                };
                KernelOutput::Jacobi {
                    previous,
                    last: x.clone(),
                    iterations: params.iterations,
                }
            }
            Workload::Dsolve { solution, .. } => KernelOutput::Vector(solution.clone()),
            Workload::Pcg { result, .. } => {
                let r = result.as_ref().ok_or_else(not_run)?;
                KernelOutput::Pcg {
                    x: r.x.clone(),
                    iterations: r.iterations,
                    relative_residual: r.relative_residual,
                }
            }
            Workload::Asm { plan, values, .. } => {
                let mut m = crate::arr_kernels::asm_pattern(plan);
                m.values_mut().copy_from_slice(values);
                KernelOutput::Csr(m)
            }
            Workload::Trmat { result, .. } => {
                KernelOutput::Csr(result.clone().ok_or_else(not_run)?)
            }
            Workload::Cmck { work, .. } => KernelOutput::Permutation(
                Permutation::from_inverse(work.order.clone())?
                    .forward()
                    .to_vec(),
            ),
            Workload::Mperm { fill, .. } => {
                let (matrix, rhs) = fill.clone().ok_or_else(not_run)?.into_sorted();
                KernelOutput::Permuted { matrix, rhs }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aggregator {
    Median,
    Min,
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregator::Median => "median",
            Aggregator::Min => "min",
        })
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Aggregator::Median),
            "min" => Ok(Aggregator::Min),
            _ => Err(Error::Parameter(format!("unknown aggregator {s:?}"))),
        }
    }
}

/// How many times a kernel runs and how the samples are reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingPolicy {
    pub warmup_runs: usize,
    pub measured_runs: usize,
    pub aggregator: Aggregator,
}

impl TimingPolicy {
    pub fn new(warmup_runs: usize, measured_runs: usize, aggregator: Aggregator) -> Result<Self> {
        if measured_runs < 3 {
            return Err(Error::Parameter(format!(
                "at least 3 measured runs required, got {measured_runs}"
            )));
        }
        Ok(Self {
            warmup_runs,
            measured_runs,
            aggregator,
        })
    }
}

impl Default for TimingPolicy {
    fn default() -> Self {
        Self {
            warmup_runs: 3,
            measured_runs: 7,
            aggregator: Aggregator::Median,
        }
    }
}

impl fmt::Display for TimingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.warmup_runs, self.measured_runs, self.aggregator
        )
    }
}

/// Parses `warmups,runs,agg`.
impl FromStr for TimingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [w, r, a] = parts[..] else {
            return Err(Error::Parameter(format!(
                "policy {s:?} is not warmups,runs,agg"
            )));
        };
        let count = |x: &str| {
            x.parse::<usize>()
                .map_err(|_| Error::Parameter(format!("policy count {x:?} is not a number")))
        };
        TimingPolicy::new(count(w)?, count(r)?, a.parse()?)
    }
}

/// Measured samples of one cell, in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub samples: Vec<f64>,
    pub aggregate: f64,
    pub median: f64,
    pub min: f64,
    /// Median and minimum differ by more than 50%.
    pub dispersed: bool,
}

impl Timing {
    pub fn from_samples(samples: Vec<f64>, aggregator: Aggregator) -> Self {
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n == 0 {
            0.0
        } else if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        let min = sorted.first().copied().unwrap_or(0.0);
        let aggregate = match aggregator {
            Aggregator::Median => median,
            Aggregator::Min => min,
        };
        Self {
            samples,
            aggregate,
            median,
            min,
            dispersed: min > 0.0 && median > 1.5 * min,
        }
    }
}

/// Runs warmups then measured runs; only [`Workload::run`] is inside the
/// clock.
pub fn time_workload(w: &mut Workload, policy: &TimingPolicy) -> Result<Timing> {
    for _ in 0..policy.warmup_runs {
        w.run()?;
    }
    let mut samples = Vec::with_capacity(policy.measured_runs);
    for _ in 0..policy.measured_runs {
        let start = Instant::now();
        w.run()?;
        // Floor at one nanosecond so recorded times stay positive.
        samples.push(start.elapsed().as_secs_f64().max(1e-9));
    }
    Ok(Timing::from_samples(samples, policy.aggregator))
}

/// Prepares, times and extracts the output of one cell.
pub fn run_cell(inputs: &BenchInputs, policy: &TimingPolicy) -> Result<(Timing, KernelOutput)> {
    let mut w = Workload::prepare(inputs)?;
    let timing = time_workload(&mut w, policy)?;
    Ok((timing, w.output()?))
}

/// Verdict of the oracle gate.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn verdict(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

const VECTOR_TOL: f64 = 1e-12;
const SOLVE_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;

/// Compares an output with brute-force references computed from `inputs`.
/// Dense references are used up to the oracle size limit, row-streamed
/// references beyond it.
pub fn check(inputs: &BenchInputs, output: &KernelOutput) -> Result<CheckReport> {
    let wrong_shape = || {
        Ok(CheckReport::verdict(
            false,
            format!("{} produced an output of the wrong kind", inputs.benchmark),
        ))
    };
    let small = |m: &CsrMatrix| m.n_rows() <= oracles::DENSE_LIMIT;
    match (inputs.benchmark, output) {
        (Benchmark::Spmatvec, KernelOutput::Vector(y)) => {
            let m = inputs.matrix()?;
            let want = if small(m) {
                oracles::dense_matvec(&oracles::dense_of(m)?, &inputs.vector)?
            } else {
                oracles::streamed_matvec(m, &inputs.vector)?
            };
            let err = oracles::relative_error(y, &want);
            Ok(CheckReport::verdict(
                err <= VECTOR_TOL,
                format!("relative error {err:e}"),
            ))
        }
        (Benchmark::Spmatmat, KernelOutput::Dense { rows, cols, data }) => {
            let m = inputs.matrix()?;
            let k = inputs.params.spmatmat_cols;
            if *rows != m.n_rows() || *cols != k {
                return Ok(CheckReport::verdict(false, format!("shape {rows}x{cols}")));
            }
            let want = if small(m) {
                oracles::dense_matmat(&oracles::dense_of(m)?, &inputs.dense, k)?
            } else {
                oracles::streamed_matmat(m, &inputs.dense, k)?
            };
            let err = oracles::relative_error(data, &want);
            Ok(CheckReport::verdict(
                err <= VECTOR_TOL,
                format!("relative error {err:e}"),
            ))
        }
        (
            Benchmark::Jacit,
            KernelOutput::Jacobi {
                previous,
                last,
                iterations,
            },
        ) => {
            let m = inputs.matrix()?;
            if *iterations != inputs.params.jacobi_iterations {
                return Ok(CheckReport::verdict(
                    false,
                    format!("{iterations} sweeps reported"),
                ));
            }
            let want = if small(m) {
                oracles::dense_jacobi_sweep(&oracles::dense_of(m)?, &inputs.vector, previous)?
            } else {
                oracles::streamed_jacobi_sweep(m, &inputs.vector, previous)?
            };
            let err = oracles::relative_error(last, &want);
            Ok(CheckReport::verdict(
                err <= VECTOR_TOL,
                format!("last sweep relative error {err:e}"),
            ))
        }
        (Benchmark::Dsolve, KernelOutput::Vector(x)) => {
            let m = inputs.matrix()?;
            let err = oracles::backward_error(m, x, &inputs.vector)?;
            Ok(CheckReport::verdict(
                err <= SOLVE_TOL,
                format!("backward error {err:e}"),
            ))
        }
        (
            Benchmark::Pcg,
            KernelOutput::Pcg {
                x,
                iterations,
                relative_residual,
            },
        ) => {
            let m = inputs.matrix()?;
            let recomputed = oracles::relative_residual(m, x, &inputs.vector)?;
            let gap = (recomputed - relative_residual).abs();
            let ok = *iterations <= inputs.params.pcg_iterations
                && gap <= RESIDUAL_TOL * recomputed.max(1.0);
            Ok(CheckReport::verdict(
                ok,
                format!("reported {relative_residual:e}, recomputed {recomputed:e}"),
            ))
        }
        (Benchmark::Asm, KernelOutput::Csr(k)) => {
            let mesh = inputs.mesh()?;
            if !is_valid_csr(k) || k.n_rows() != mesh.n_nodes() || !k.is_square() {
                return Ok(CheckReport::verdict(
                    false,
                    "malformed global matrix".into(),
                ));
            }
            if mesh.n_nodes() <= oracles::DENSE_LIMIT {
                let want = oracles::dense_assemble(mesh)?;
                let got = oracles::dense_of(k)?;
                let err = oracles::relative_error(got.cells(), want.cells());
                Ok(CheckReport::verdict(
                    err <= VECTOR_TOL,
                    format!("relative error {err:e}"),
                ))
            } else {
                let ok = (0..k.n_rows()).all(|r| {
                    let (cols, vals) = k.row(r);
                    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
                    let sum: f64 = vals.iter().sum();
                    sum.abs() <= VECTOR_TOL * scale.max(1.0)
                        && cols.iter().zip(vals).all(|(&c, &v)| {
                            k.get(c, r)
                                .is_some_and(|t| (t - v).abs() <= VECTOR_TOL * scale.max(1.0))
                        })
                });
                Ok(CheckReport::verdict(ok, "row sums and symmetry".into()))
            }
        }
        (Benchmark::Trmat, KernelOutput::Csr(t)) => {
            let m = inputs.matrix()?;
            let ok = is_valid_csr(t)
                && t.n_rows() == m.n_cols()
                && t.n_cols() == m.n_rows()
                && oracles::sorted_triplets(t) == oracles::transposed_triplets(m);
            Ok(CheckReport::verdict(ok, "exact transpose triples".into()))
        }
        (Benchmark::Cmck, KernelOutput::Permutation(forward)) => {
            let m = inputs
                .symmetric
                .as_ref()
                .ok_or_else(|| Error::Parameter("CMcK inputs lack the symmetric pattern".into()))?;
            let n = m.n_rows();
            if !oracles::is_permutation(forward, n) {
                return Ok(CheckReport::verdict(false, "not a permutation".into()));
            }
            let order = oracles::reference_cuthill_mckee(m);
            let ok = order
                .iter()
                .enumerate()
                .all(|(new, &old)| forward[old] == new);
            Ok(CheckReport::verdict(ok, "reference ordering".into()))
        }
        (Benchmark::Mperm, KernelOutput::Permuted { matrix, rhs }) => {
            let m = inputs.matrix()?;
            let p = inputs
                .permutation
                .as_ref()
                .ok_or_else(|| Error::Parameter("MPERM inputs lack a permutation".into()))?;
            let fwd = p.forward();
            let rhs_ok = rhs.len() == inputs.vector.len()
                && inputs
                    .vector
                    .iter()
                    .enumerate()
                    .all(|(i, v)| rhs[fwd[i]].to_bits() == v.to_bits());
            let ok = rhs_ok
                && is_valid_csr(matrix)
                && oracles::sorted_triplets(matrix) == oracles::permuted_triplets(m, fwd);
            Ok(CheckReport::verdict(ok, "exact permuted triples".into()))
        }
        _ => wrong_shape(),
    }
}

fn is_valid_csr(m: &CsrMatrix) -> bool {
    CsrMatrix::try_new(
        m.n_rows(),
        m.n_cols(),
        m.row_ptr().to_vec(),
        m.col_ind().to_vec(),
        m.values().to_vec(),
    )
    .is_ok()
}
