//! Mode-to-state lifting: from an `M×M` mode transformation to the heralded
//! transformation `W` on dual-rail qubit basis states.
//!
//! Basis states are written as sorted mode tuples listing every photon, so
//! `[3, 3, 10, 12]` is two photons in mode 3 and one each in modes 10 and 12.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{CMatrix, ModeIndex, ModeUnitary};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest photon number and grid size the brute-force oracle accepts.
pub const ORACLE_MAX_PHOTONS: usize = 4;
pub const ORACLE_MAX_MODES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "name")]
pub enum GateTarget {
    Phase { angle: f64 },
    Hadamard,
    Cz,
}

impl GateTarget {
    /// Parses `phase(<radians>)`, `hadamard`/`h`, or `cz`.
    pub fn parse(name: &str) -> Result<Self> {
        let trimmed = name.trim().to_ascii_lowercase();
        match trimmed.as_str() {
            "hadamard" | "h" => return Ok(Self::Hadamard),
            "cz" => return Ok(Self::Cz),
            _ => {}
        }
        if let Some(arg) = trimmed
            .strip_prefix("phase(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            let angle = arg
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::UnknownGate(name.to_string()))?;
            return Ok(Self::Phase { angle });
        }
        Err(Error::UnknownGate(name.to_string()))
    }

    pub fn qubits(&self) -> usize {
        match self {
            Self::Phase { .. } | Self::Hadamard => 1,
            Self::Cz => 2,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Phase { angle } => format!("phase({angle})"),
            Self::Hadamard => "hadamard".into(),
            Self::Cz => "cz".into(),
        }
    }
}

/// Modes carrying logical `|0⟩` and `|1⟩` of one dual-rail qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitModes {
    pub zero: ModeIndex,
    pub one: ModeIndex,
}

impl QubitModes {
    pub fn new(zero: ModeIndex, one: ModeIndex) -> Self {
        Self { zero, one }
    }

    pub fn mode(&self, bit: usize) -> ModeIndex {
        if bit == 0 {
            self.zero
        } else {
            self.one
        }
    }
}

/// Where the qubits and ancillas sit on the grid and which gate is wanted.
///
/// Qubits exit in the modes they entered. Each ancilla mode is loaded with
/// one photon and heralded on exactly one photon; every other mode must be
/// found empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    modes: usize,
    qubits: Vec<QubitModes>,
    ancillas: Vec<ModeIndex>,
    target: GateTarget,
}

impl GateSpec {
    pub fn new(
        modes: usize,
        qubits: Vec<QubitModes>,
        ancillas: Vec<ModeIndex>,
        target: GateTarget,
    ) -> Result<Self> {
        let spec = Self {
            modes,
            qubits,
            ancillas,
            target,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = self.loaded_modes();
        if let Some(&bad) = seen.iter().find(|&&m| m >= self.modes) {
            return Err(Error::InvalidSpec(format!(
                "mode {bad} outside the {}-mode grid",
                self.modes
            )));
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec("duplicate mode assignment".into()));
        }
        match (self.qubits.len(), self.ancillas.len()) {
            (1, 0) | (2, 2) => {}
            (q, a) => {
                return Err(Error::InvalidSpec(format!(
                    "unsupported layout: {q} qubit(s) with {a} ancilla(s)"
                )))
            }
        }
        if self.target.qubits() != self.qubits.len() {
            return Err(Error::InvalidSpec(format!(
                "target {} acts on {} qubit(s) but the layout has {}",
                self.target.label(),
                self.target.qubits(),
                self.qubits.len()
            )));
        }
        Ok(())
    }

    /// One qubit on adjacent modes `(M/2 - 1, M/2)`.
    pub fn single_qubit(modes: usize, target: GateTarget) -> Result<Self> {
        let c = modes / 2;
        if c == 0 {
            return Err(Error::InvalidSpec(format!("{modes} modes is too few")));
        }
        Self::new(modes, vec![QubitModes::new(c - 1, c)], vec![], target)
    }

    /// CZ layout `[A0, A1, u, (empty), v, B1, B0]` centred on mode `M/2`.
    pub fn cz_default(modes: usize) -> Result<Self> {
        let c = modes / 2;
        if c < 3 || c + 3 >= modes {
            return Err(Error::InvalidSpec(format!(
                "{modes} modes is too few for the CZ layout"
            )));
        }
        Self::new(
            modes,
            vec![QubitModes::new(c - 3, c - 2), QubitModes::new(c + 3, c + 2)],
            vec![c - 1, c + 1],
            GateTarget::Cz,
        )
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn qubits(&self) -> &[QubitModes] {
        &self.qubits
    }

    pub fn ancillas(&self) -> &[ModeIndex] {
        &self.ancillas
    }

    pub fn target(&self) -> GateTarget {
        self.target
    }

    /// Computational modes followed by ancilla modes:
    /// `[q0.zero, q0.one, q1.zero, q1.one, ..., ancillas...]`.
    pub fn loaded_modes(&self) -> Vec<ModeIndex> {
        self.qubits
            .iter()
            .flat_map(|q| [q.zero, q.one])
            .chain(self.ancillas.iter().copied())
            .collect()
    }

    pub fn computational_modes(&self) -> Vec<ModeIndex> {
        self.qubits.iter().flat_map(|q| [q.zero, q.one]).collect()
    }

    /// The detection pattern that flags success: one photon per ancilla mode.
    pub fn herald(&self) -> Vec<(ModeIndex, u8)> {
        self.ancillas.iter().map(|&a| (a, 1)).collect()
    }

    pub fn photons(&self) -> usize {
        self.qubits.len() + self.ancillas.len()
    }

    /// Re-centres the layout on a grid of `modes` bins by shifting every
    /// index by `offset`.
    pub fn shifted(&self, modes: usize, offset: usize) -> Result<Self> {
        Self::new(
            modes,
            self.qubits
                .iter()
                .map(|q| QubitModes::new(q.zero + offset, q.one + offset))
                .collect(),
            self.ancillas.iter().map(|a| a + offset).collect(),
            self.target,
        )
    }

    /// Logical input basis in binary order, full photon tuples.
    pub fn input_basis(&self) -> Vec<Vec<ModeIndex>> {
        logical_states(&self.qubits)
            .into_iter()
            .map(|mut occ| {
                occ.extend_from_slice(&self.ancillas);
                occ.sort_unstable();
                occ
            })
            .collect()
    }

    /// Output basis: the logical states in binary order, then every other
    /// placement of the computational photons, lexicographic by mode index.
    pub fn output_basis(&self) -> Vec<Vec<ModeIndex>> {
        let mut herald_modes: Vec<ModeIndex> = Vec::new();
        for (m, n) in self.herald() {
            herald_modes.extend(std::iter::repeat_n(m, n as usize));
        }
        output_rows(&self.qubits, self.qubits.len(), &herald_modes)
    }
}

/// Logical basis states (sorted computational tuples), in binary order with
/// the first qubit as most significant bit.
fn logical_states(qubits: &[QubitModes]) -> Vec<Vec<ModeIndex>> {
    let n = qubits.len();
    (0..1usize << n)
        .map(|bits| {
            let mut occ: Vec<ModeIndex> = qubits
                .iter()
                .enumerate()
                .map(|(i, q)| q.mode((bits >> (n - 1 - i)) & 1))
                .collect();
            occ.sort_unstable();
            occ
        })
        .collect()
}

/// All multisets of `k` elements drawn from sorted `modes`, lexicographic.
fn multisets(modes: &[ModeIndex], k: usize) -> Vec<Vec<ModeIndex>> {
    fn rec(
        modes: &[ModeIndex],
        start: usize,
        k: usize,
        cur: &mut Vec<ModeIndex>,
        out: &mut Vec<Vec<ModeIndex>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..modes.len() {
            cur.push(modes[i]);
            rec(modes, i, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(modes, 0, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn output_rows(
    qubits: &[QubitModes],
    free_photons: usize,
    herald_modes: &[ModeIndex],
) -> Vec<Vec<ModeIndex>> {
    let mut comp: Vec<ModeIndex> = qubits.iter().flat_map(|q| [q.zero, q.one]).collect();
    comp.sort_unstable();
    let mut rows = Vec::new();
    if free_photons == qubits.len() {
        rows.extend(logical_states(qubits));
    }
    for occ in multisets(&comp, free_photons) {
        if !rows.contains(&occ) {
            rows.push(occ);
        }
    }
    rows.into_iter()
        .map(|mut occ| {
            occ.extend_from_slice(herald_modes);
            occ.sort_unstable();
            occ
        })
        .collect()
}

/// Heralded state transformation `W` with explicit row/column bases.
#[derive(Clone, Debug, PartialEq)]
pub struct StateTransform {
    pub entries: CMatrix,
    pub basis_out: Vec<Vec<ModeIndex>>,
    pub basis_in: Vec<Vec<ModeIndex>>,
}

impl StateTransform {
    pub fn d_out(&self) -> usize {
        self.entries.nrows()
    }

    pub fn d_in(&self) -> usize {
        self.entries.ncols()
    }
}

/// Index map from `W` back to the loaded-mode submatrix
/// `S[a][b] = V[loaded[a]][loaded[b]]`.
///
/// Every lift depends on `V` only through `S`, which is what lets the
/// optimizer propagate just the loaded columns.
#[derive(Clone, Debug)]
pub(crate) enum LocalLift {
    /// `W[l][m] = S[l][m]`.
    SinglePhoton,
    /// `W[l][m] = norm_l · perm(S[rows_l][cols_m])`, four photons.
    FourPhoton {
        rows: Vec<[usize; 4]>,
        cols: Vec<[usize; 4]>,
        norms: Vec<f64>,
    },
}

const PERMS4: [[usize; 4]; 24] = {
    let mut out = [[0usize; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let d = 6usize.wrapping_sub(a + b + c);
                if a != b && a != c && b != c && d < 4 && d != a && d != b && d != c {
                    out[n] = [a, b, c, d];
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl LocalLift {
    pub(crate) fn for_spec(spec: &GateSpec) -> Self {
        if spec.qubits().len() == 1 {
            return Self::SinglePhoton;
        }
        let loaded = spec.loaded_modes();
        let local = |mode: ModeIndex| loaded.iter().position(|&m| m == mode).unwrap();
        let (u, v) = (local(spec.ancillas()[0]), local(spec.ancillas()[1]));
        let (qa, qb) = (spec.qubits()[0], spec.qubits()[1]);

        let cols = (0..4)
            .map(|m| [local(qa.mode(m >> 1)), local(qb.mode(m & 1)), u, v])
            .collect();
        let out = spec.output_basis();
        let ancillas = spec.ancillas();
        let mut rows = Vec::with_capacity(out.len());
        let mut norms = Vec::with_capacity(out.len());
        for occ in out {
            let mut comp = occ.clone();
            for a in ancillas {
                let i = comp.iter().position(|m| m == a).unwrap();
                comp.remove(i);
            }
            let (p, q) = (local(comp[0]), local(comp[1]));
            rows.push([p, q, u, v]);
            norms.push(if p == q {
                std::f64::consts::FRAC_1_SQRT_2
            } else {
                1.0
            });
        }
        Self::FourPhoton { rows, cols, norms }
    }

    pub(crate) fn apply(&self, s: &CMatrix) -> CMatrix {
        match self {
            Self::SinglePhoton => s.clone(),
            Self::FourPhoton { rows, cols, norms } => {
                CMatrix::from_fn(rows.len(), cols.len(), |l, m| {
                    let (r, c) = (&rows[l], &cols[m]);
                    let perm: Complex64 = PERMS4
                        .iter()
                        .map(|p| {
                            s[(r[0], c[p[0]])]
                                * s[(r[1], c[p[1]])]
                                * s[(r[2], c[p[2]])]
                                * s[(r[3], c[p[3]])]
                        })
                        .sum();
                    perm * norms[l]
                })
            }
        }
    }

    /// Pulls `∂J/∂W` back to `∂J/∂S` (holomorphic chain rule).
    pub(crate) fn pullback(&self, s: &CMatrix, dw: &CMatrix) -> CMatrix {
        match self {
            Self::SinglePhoton => dw.clone(),
            Self::FourPhoton { rows, cols, norms } => {
                let mut ds = CMatrix::zeros(s.nrows(), s.ncols());
                for (l, r) in rows.iter().enumerate() {
                    for (m, c) in cols.iter().enumerate() {
                        let g = dw[(l, m)] * norms[l];
                        if g == ZERO {
                            continue;
                        }
                        for p in &PERMS4 {
                            let f = [
                                s[(r[0], c[p[0]])],
                                s[(r[1], c[p[1]])],
                                s[(r[2], c[p[2]])],
                                s[(r[3], c[p[3]])],
                            ];
                            let (f01, f23) = (f[0] * f[1], f[2] * f[3]);
                            ds[(r[0], c[p[0]])] += g * f[1] * f23;
                            ds[(r[1], c[p[1]])] += g * f[0] * f23;
                            ds[(r[2], c[p[2]])] += g * f01 * f[3];
                            ds[(r[3], c[p[3]])] += g * f01 * f[2];
                        }
                    }
                }
                ds
            }
        }
    }
}

/// Loaded-mode submatrix `S[a][b] = V[loaded[a]][loaded[b]]`.
pub(crate) fn loaded_submatrix(v: &CMatrix, loaded: &[ModeIndex]) -> CMatrix {
    CMatrix::from_fn(loaded.len(), loaded.len(), |a, b| v[(loaded[a], loaded[b])])
}

fn check_dims(v: &CMatrix, spec: &GateSpec) -> Result<()> {
    if v.nrows() != spec.modes() || v.ncols() != spec.modes() {
        return Err(Error::ShapeMismatch(format!(
            "mode transform is {}x{} but the gate spec has M = {}",
            v.nrows(),
            v.ncols(),
            spec.modes()
        )));
    }
    Ok(())
}

/// Lifts any (possibly band-filtered, non-unitary) mode matrix.
pub fn lift_matrix(v: &CMatrix, spec: &GateSpec) -> Result<StateTransform> {
    check_dims(v, spec)?;
    let lift = LocalLift::for_spec(spec);
    let s = loaded_submatrix(v, &spec.loaded_modes());
    Ok(StateTransform {
        entries: lift.apply(&s),
        basis_out: spec.output_basis(),
        basis_in: spec.input_basis(),
    })
}

/// `W[l][m] = V[p_l][r_m]` for one photon and no ancillas.
pub fn lift_single_photon(v: &ModeUnitary, spec: &GateSpec) -> Result<StateTransform> {
    if spec.qubits().len() != 1 || !spec.ancillas().is_empty() {
        return Err(Error::InvalidSpec(
            "single-photon lift needs exactly one qubit and no ancillas".into(),
        ));
    }
    lift_matrix(v.matrix(), spec)
}

/// Two qubits plus two ancillas heralded on one photon each: the 10×4
/// matrix summing all 24 paths from `(r_m, s_m, u, v)` to `(p_l, q_l, u, v)`.
pub fn lift_two_photon_heralded(v: &ModeUnitary, spec: &GateSpec) -> Result<StateTransform> {
    if spec.qubits().len() != 2 || spec.ancillas().len() != 2 {
        return Err(Error::InvalidSpec(
            "two-photon lift needs two qubits and two ancillas".into(),
        ));
    }
    lift_matrix(v.matrix(), spec)
}

fn factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

fn check_oracle_size(modes: usize, photons: usize) -> Result<()> {
    if modes > ORACLE_MAX_MODES || photons > ORACLE_MAX_PHOTONS {
        return Err(Error::OracleLimit(format!(
            "{photons} photons in {modes} modes (limits: {ORACLE_MAX_PHOTONS} photons, {ORACLE_MAX_MODES} modes)"
        )));
    }
    Ok(())
}

/// Full output state `Û|in⟩` as a map from occupation vector to amplitude,
/// by expanding `Π_k (Σ_j V[j][k] a_j†)^{n_k}` monomial by monomial.
pub fn fock_output_state(v: &CMatrix, in_occ: &[u8]) -> Result<HashMap<Vec<u8>, Complex64>> {
    let modes = v.nrows();
    if in_occ.len() != modes {
        return Err(Error::ShapeMismatch(format!(
            "occupation has {} entries for {modes} modes",
            in_occ.len()
        )));
    }
    let photons: usize = in_occ.iter().map(|&n| n as usize).sum();
    check_oracle_size(modes, photons)?;

    let mut poly: HashMap<Vec<u8>, Complex64> = HashMap::new();
    poly.insert(vec![0; modes], Complex64::new(1.0, 0.0));
    for (k, &count) in in_occ.iter().enumerate() {
        for _ in 0..count {
            let mut next: HashMap<Vec<u8>, Complex64> = HashMap::with_capacity(poly.len() * modes);
            for (mono, coef) in &poly {
                for j in 0..modes {
                    let vjk = v[(j, k)];
                    if vjk == ZERO {
                        continue;
                    }
                    let mut m = mono.clone();
                    m[j] += 1;
                    *next.entry(m).or_insert(ZERO) += coef * vjk;
                }
            }
            poly = next;
        }
    }
    let in_norm: f64 = in_occ.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
    Ok(poly
        .into_iter()
        .map(|(occ, coef)| {
            let out_norm: f64 = occ.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
            (occ, coef * out_norm / in_norm)
        })
        .collect())
}

/// `⟨out|Û(V)|in⟩` from the full Fock-space expansion.
///
/// Photon-number mismatch gives zero rather than an error.
pub fn brute_force_amplitude(v: &CMatrix, in_occ: &[u8], out_occ: &[u8]) -> Result<Complex64> {
    if out_occ.len() != v.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "occupation has {} entries for {} modes",
            out_occ.len(),
            v.nrows()
        )));
    }
    let n_in: u32 = in_occ.iter().map(|&n| n as u32).sum();
    let n_out: u32 = out_occ.iter().map(|&n| n as u32).sum();
    if n_in != n_out {
        check_oracle_size(v.nrows(), n_in.max(n_out) as usize)?;
        return Ok(ZERO);
    }
    let state = fock_output_state(v, in_occ)?;
    Ok(state.get(out_occ).copied().unwrap_or(ZERO))
}

pub fn tuple_to_occupation(tuple: &[ModeIndex], modes: usize) -> Vec<u8> {
    let mut occ = vec![0u8; modes];
    for &m in tuple {
        occ[m] += 1;
    }
    occ
}

/// Unheralded transformation over the whole output Fock space.
#[derive(Clone, Debug)]
pub struct FullTransform {
    pub modes: usize,
    pub basis_in: Vec<Vec<ModeIndex>>,
    /// One output state per input column.
    pub columns: Vec<HashMap<Vec<u8>, Complex64>>,
}

impl FullTransform {
    /// Runs the brute-force oracle on each input tuple.
    pub fn compute(v: &CMatrix, basis_in: &[Vec<ModeIndex>]) -> Result<Self> {
        let modes = v.nrows();
        let columns = basis_in
            .iter()
            .map(|t| fock_output_state(v, &tuple_to_occupation(t, modes)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            modes,
            basis_in: basis_in.to_vec(),
            columns,
        })
    }

    pub fn amplitude(&self, out: &[ModeIndex], column: usize) -> Complex64 {
        self.columns[column]
            .get(&tuple_to_occupation(out, self.modes))
            .copied()
            .unwrap_or(ZERO)
    }
}

/// Selects the rows matching `herald` (exact photon counts on the listed
/// modes), with the remaining photons confined to the spec's computational
/// modes and every other mode empty.
pub fn herald_rows(
    full: &FullTransform,
    spec: &GateSpec,
    herald: &[(ModeIndex, u8)],
) -> Result<StateTransform> {
    let total = spec.photons();
    let heralded: usize = herald.iter().map(|&(_, n)| n as usize).sum();
    if heralded > total {
        return Err(Error::InvalidSpec(format!(
            "herald requires {heralded} photons but only {total} are present"
        )));
    }
    let mut herald_modes = Vec::new();
    for &(m, n) in herald {
        herald_modes.extend(std::iter::repeat_n(m, n as usize));
    }
    let basis_out = output_rows(spec.qubits(), total - heralded, &herald_modes);
    let entries = CMatrix::from_fn(basis_out.len(), full.basis_in.len(), |l, m| {
        full.amplitude(&basis_out[l], m)
    });
    Ok(StateTransform {
        entries,
        basis_out,
        basis_in: full.basis_in.clone(),
    })
}

/// Haar-random unitary: QR of a complex Gaussian matrix, with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(modes: usize, rng: &mut R) -> ModeUnitary {
    let g = CMatrix::from_fn(modes, modes, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            col *= d / d.norm();
        }
    }
    ModeUnitary::from_matrix(q, 1e-10).expect("QR of a full-rank matrix is unitary")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub modes: usize,
    pub trials: usize,
    /// Largest entrywise `|W_lift - W_oracle|` over all trials.
    pub max_deviation: f64,
}

/// Compares the closed-form two-photon lift against the brute-force oracle
/// on `trials` random unitaries, using the default CZ layout on `modes`.
pub fn oracle_check(modes: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    let spec = GateSpec::cz_default(modes)?;
    check_oracle_size(modes, spec.photons())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation = 0.0_f64;
    for _ in 0..trials {
        let u = random_unitary(modes, &mut rng);
        let lifted = lift_two_photon_heralded(&u, &spec)?;
        let full = FullTransform::compute(u.matrix(), &spec.input_basis())?;
        let oracle = herald_rows(&full, &spec, &spec.herald())?;
        let dev = (&lifted.entries - &oracle.entries)
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        max_deviation = max_deviation.max(dev);
    }
    Ok(OracleReport {
        modes,
        trials,
        max_deviation,
    })
}
