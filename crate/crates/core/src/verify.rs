//! Seeded self-check suites: every kernel against its oracle, the
//! structural invariants, and bandwidth reduction on fixture families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arr_kernels::{asm_assemble, bandwidth, cmck, mperm, trmat};
use crate::error::Result;
use crate::mat_io::{
    gen_arrow, gen_banded, gen_random, gen_tri_mesh, symmetrize_lower, with_dominant_diagonal,
    Band, TriMesh,
};
use crate::oracles;
use crate::ptr_kernels::{
    dsolve, jacit, lu_factor_for_dsolve, pcg, spmatmat, spmatvec, JacobiParams, PcgParams,
};
use crate::types::{CsrMatrix, DenseMatrix, LinkedRowMatrix, OrthoLinkedMatrix, Permutation};

/// Outcome of one check on one fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub kernel: &'static str,
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

impl CaseResult {
    fn new(kernel: &'static str, case: &str, passed: bool, detail: String) -> Self {
        Self {
            kernel,
            case: case.to_string(),
            passed,
            detail,
        }
    }
}

/// Per-kernel tally of a suite.
pub fn summarize(results: &[CaseResult]) -> Vec<(&'static str, usize, usize)> {
    let mut out: Vec<(&'static str, usize, usize)> = Vec::new();
    for r in results {
        match out.iter_mut().find(|(k, _, _)| *k == r.kernel) {
            Some(entry) => {
                entry.1 += usize::from(r.passed);
                entry.2 += 1;
            }
            None => out.push((r.kernel, usize::from(r.passed), 1)),
        }
    }
    out
}

/// Random square fixture with `n <= 64`, density in `[0.05, 0.6]` and a
/// dominant diagonal.
pub fn random_fixture(seed: u64) -> Result<CsrMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=64);
    let density = rng.gen_range(0.05..=0.6);
    with_dominant_diagonal(&gen_random(n, n, density, rng.gen())?)
}

/// Symmetric positive definite fixture derived from the same seed.
pub fn spd_fixture(seed: u64) -> Result<CsrMatrix> {
    with_dominant_diagonal(&symmetrize_lower(&random_fixture(seed)?)?)
}

pub fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forward: Vec<usize> = (0..n).collect();
    forward.shuffle(&mut rng);
    Permutation::from_forward(forward).expect("shuffle is a bijection")
}

/// Structured mesh with nodes displaced by up to 0.15 in each coordinate.
pub fn jittered_mesh(seed: u64) -> Result<TriMesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = rng.gen_range(1..=8);
    let ny = rng.gen_range(1..=8);
    let base = gen_tri_mesh(nx, ny)?;
    let nodes = base
        .nodes()
        .iter()
        .map(|p| {
            [
                p[0] + rng.gen_range(-0.15..=0.15),
                p[1] + rng.gen_range(-0.15..=0.15),
            ]
        })
        .collect();
    TriMesh::try_new(nodes, base.elements().to_vec())
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

const MATVEC_TOL: f64 = 1e-12;
const SOLVE_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;
const CONDITION_LIMIT: f64 = 1e6;

/// Every kernel against its dense oracle over `count` seeded fixtures.
pub fn oracle_equivalence(count: usize, seed: u64) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let case = format!("seed {s}");
        let m = random_fixture(s)?;
        let n = m.n_rows();
        let dense = oracles::dense_of(&m)?;
        let v = random_vector(n, s ^ 0xa5a5);

        let linked = LinkedRowMatrix::from_csr(&m)?;
        let ortho = OrthoLinkedMatrix::from_csr(&m)?;
        let ok = linked.to_csr() == m
            && oracles::dense_of(&linked)? == dense
            && oracles::dense_of(&ortho)? == dense;
        out.push(CaseResult::new("conversions", &case, ok, "exact".into()));

        let y = spmatvec(&linked, &v)?;
        let err = oracles::relative_error(&y, &oracles::dense_matvec(&dense, &v)?);
        out.push(CaseResult::new(
            "SPMATVEC",
            &case,
            err <= MATVEC_TOL,
            format!("{err:e}"),
        ));

        let k = 3;
        let b = random_vector(n * k, s ^ 0x5a5a);
        let got = spmatmat(&linked, &DenseMatrix::from_row_major(n, k, &b)?)?;
        let err =
            oracles::relative_error(&got.to_row_major(), &oracles::dense_matmat(&dense, &b, k)?);
        out.push(CaseResult::new(
            "SPMATMAT",
            &case,
            err <= MATVEC_TOL,
            format!("{err:e}"),
        ));

        let x0 = random_vector(n, s ^ 0x3c3c);
        let one = JacobiParams {
            iterations: 1,
            record_residual: false,
        };
        let got = jacit(&linked, &v, &x0, &one)?.x;
        let err = oracles::relative_error(&got, &oracles::dense_jacobi_sweep(&dense, &v, &x0)?);
        out.push(CaseResult::new(
            "JACIT",
            &case,
            err <= MATVEC_TOL,
            format!("{err:e}"),
        ));

        let cond = oracles::condition_estimate(&dense)?;
        if cond <= CONDITION_LIMIT {
            let x = dsolve(&lu_factor_for_dsolve(&m)?, &v)?;
            let ax = oracles::dense_matvec(&dense, &x)?;
            let r: Vec<f64> = ax.iter().zip(&v).map(|(a, b)| a - b).collect();
            let rel = norm2(&r) / norm2(&v).max(f64::MIN_POSITIVE);
            out.push(CaseResult::new(
                "DSOLVE",
                &case,
                rel <= SOLVE_TOL,
                format!("{rel:e}"),
            ));
        }

        let spd = spd_fixture(s)?;
        let spd_dense = oracles::dense_of(&spd)?;
        let res = pcg(
            &LinkedRowMatrix::from_csr(&spd)?,
            &v,
            &PcgParams {
                max_iterations: 10 * n.max(1),
                tolerance: 1e-10,
            },
        )?;
        let ax = oracles::dense_matvec(&spd_dense, &res.x)?;
        let r: Vec<f64> = ax.iter().zip(&v).map(|(a, b)| b - a).collect();
        let bn = norm2(&v);
        let recomputed = if bn == 0.0 { norm2(&r) } else { norm2(&r) / bn };
        let gap = (recomputed - res.relative_residual).abs();
        out.push(CaseResult::new(
            "PCG",
            &case,
            gap <= RESIDUAL_TOL,
            format!("gap {gap:e}"),
        ));

        let t = trmat(&m);
        let ok = oracles::dense_of(&t)? == oracles::dense_transpose(&dense)
            && oracles::sorted_triplets(&t) == oracles::transposed_triplets(&m);
        out.push(CaseResult::new("TRMAT", &case, ok, "exact".into()));

        let sym = symmetrize_lower(&m)?;
        let p = cmck(&sym)?;
        let reference = oracles::reference_cuthill_mckee(&sym);
        let ok = oracles::is_permutation(p.forward(), n) && p.inverse() == reference.as_slice();
        out.push(CaseResult::new("CMcK", &case, ok, "exact".into()));

        let p = random_permutation(n, s ^ 0x7777);
        let (pm, pb) = mperm(&m, &p, &v)?;
        let want = oracles::dense_permute_sym(&dense, p.forward())?;
        let ok = oracles::dense_of(&pm)? == want
            && (0..n).all(|i| pb[p.forward()[i]].to_bits() == v[i].to_bits());
        out.push(CaseResult::new("MPERM", &case, ok, "exact".into()));
    }
    Ok(out)
}

/// Structural invariants over `count` seeded fixtures each.
pub fn structural_invariants(count: usize, seed: u64) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let case = format!("seed {s}");
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let rows = rng.gen_range(1..=40);
        let cols = rng.gen_range(1..=40);
        let rect = gen_random(rows, cols, rng.gen_range(0.0..=0.6), rng.gen())?;
        out.push(CaseResult::new(
            "trmat involution",
            &case,
            trmat(&trmat(&rect)) == rect,
            format!("{rows}x{cols}"),
        ));

        let m = random_fixture(s)?;
        let n = m.n_rows();
        let p = random_permutation(n, s ^ 0x1111);
        let (pm, _) = mperm(&m, &p, &vec![0.0; n])?;
        let mut a: Vec<u64> = m.values().iter().map(|v| v.to_bits()).collect();
        let mut b: Vec<u64> = pm.values().iter().map(|v| v.to_bits()).collect();
        a.sort_unstable();
        b.sort_unstable();
        out.push(CaseResult::new(
            "mperm multiset",
            &case,
            a == b,
            format!("n {n}"),
        ));

        let sym = symmetrize_lower(&gen_random(n, n, rng.gen_range(0.0..=0.3), rng.gen())?)?;
        let p = cmck(&sym)?;
        let ok = oracles::is_permutation(p.forward(), n)
            && oracles::labels_contiguous_per_component(&sym, p.forward());
        out.push(CaseResult::new(
            "cmck validity",
            &case,
            ok,
            format!("n {n}"),
        ));

        let mesh = jittered_mesh(s)?;
        let k = asm_assemble(&mesh)?;
        let mut ok = k.is_pattern_symmetric();
        for r in 0..k.n_rows() {
            let (cols, vals) = k.row(r);
            let rowmax = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
            ok &= vals.iter().sum::<f64>().abs() <= 1e-12 * rowmax.max(1.0);
            for (&c, &v) in cols.iter().zip(vals) {
                ok &= k
                    .get(c, r)
                    .is_some_and(|t| (t - v).abs() <= 1e-12 * rowmax.max(1.0));
            }
        }
        out.push(CaseResult::new(
            "asm symmetry and row sums",
            &case,
            ok,
            format!("{} nodes", mesh.n_nodes()),
        ));

        let sl = symmetrize_lower(&m)?;
        out.push(CaseResult::new(
            "symmetrize_lower",
            &case,
            trmat(&sl) == sl,
            format!("n {n}"),
        ));
    }
    Ok(out)
}

/// Sparse multi-band fixture: a full tridiagonal plus up to two mirrored
/// bands within offset 12, each filled with probability 0.3 to 1.
pub fn banded_fixture(seed: u64) -> Result<CsrMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(50..=500);
    let mut offsets: Vec<isize> = (0..rng.gen_range(1..=3))
        .map(|_| rng.gen_range(1..=12))
        .collect();
    offsets.sort_unstable();
    offsets.dedup();
    let mut bands = vec![Band::new(1, 1.0), Band::new(-1, 1.0)];
    for &o in &offsets {
        if o != 1 {
            let d = rng.gen_range(0.3..=1.0);
            bands.push(Band::new(o, d));
            bands.push(Band::new(-o, d));
        }
    }
    symmetrize_lower(&gen_banded(n, &bands, rng.gen())?)
}

/// Full band of half-width 1 to 12 in natural order.
pub fn full_band_fixture(seed: u64) -> Result<CsrMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(50..=500);
    let k = rng.gen_range(1..=12isize);
    let bands: Vec<Band> = (1..=k)
        .flat_map(|o| [Band::new(o, 1.0), Band::new(-o, 1.0)])
        .collect();
    gen_banded(n, &bands, rng.gen())
}

/// [`banded_fixture`] under a random symmetric relabeling.
pub fn relabeled_band_fixture(seed: u64) -> Result<CsrMatrix> {
    let m = banded_fixture(seed)?;
    let n = m.n_rows();
    Ok(mperm(&m, &random_permutation(n, seed ^ 0x2222), &vec![0.0; n])?.0)
}

/// Bandwidth before and after Cuthill-McKee on the asserted families: full
/// bands and relabeled sparse bands must not widen, arrows must narrow.
pub fn bandwidth_reduction(count: usize, seed: u64) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        for (family, m) in [
            ("banded", full_band_fixture(s)?),
            ("banded relabeled", relabeled_band_fixture(s)?),
        ] {
            let (before, after) = bandwidths(&m)?;
            out.push(CaseResult::new(
                family,
                &format!("seed {s} n {}", m.n_rows()),
                after <= before,
                format!("{before} -> {after}"),
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let n = rng.gen_range(50..=500);
        let m = gen_arrow(n)?;
        let (before, after) = bandwidths(&m)?;
        out.push(CaseResult::new(
            "arrow",
            &format!("n {n}"),
            after < before,
            format!("{before} -> {after}"),
        ));
    }
    Ok(out)
}

/// Sparse multi-band matrices in natural order. Cuthill-McKee does not
/// guarantee a narrower band here; `passed` records whether it held.
pub fn bandwidth_observations(count: usize, seed: u64) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let m = banded_fixture(s)?;
        let (before, after) = bandwidths(&m)?;
        out.push(CaseResult::new(
            "sparse bands, natural order",
            &format!("seed {s} n {}", m.n_rows()),
            after <= before,
            format!("{before} -> {after}"),
        ));
    }
    Ok(out)
}

fn bandwidths(m: &CsrMatrix) -> Result<(usize, usize)> {
    let p = cmck(m)?;
    let (pm, _) = mperm(m, &p, &vec![0.0; m.n_rows()])?;
    Ok((bandwidth(m)?, bandwidth(&pm)?))
}
