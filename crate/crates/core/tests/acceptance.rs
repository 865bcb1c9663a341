//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Two checks are expected to fail and are kept as stated rather than
//! weakened, with the arithmetic spelled out at the failure site:
//!   - criterion 3's second instance (n=5,k=2,d=4,q=2,b=4) asks for five
//!     distinct evaluation points in a four-element field;
//!   - criterion 5's final comparison asks the punctured child's B/(αk) to
//!     exceed the parent's, but B_child = B_parent − α forces
//!     1 − r_child = (1 − r_parent)·k′/(k′−1) > 1 − r_parent.
//! A supplementary sweep covers the nearest valid instance of each.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regencode::extfield::{ExtElem, ExtFieldRep};
use regencode::gf::PrimeField;
use regencode::linalg::{solve_stein, GfMatrix, LinalgError};
use regencode::nmbr::{NmbrCode, NmbrEncoding, NmbrParams};
use regencode::nmsr::{NmsrCode, NmsrParams, PuncturedNmsr};
use regencode::share::{CodecError, NodeShare, RepairPacket};
use regencode::storage::codec::StripeCodec;
use regencode::storage::ledger::Operation;
use regencode::storage::manifest::CodeKind;
use regencode::storage::ops::cmd_encode;
use regencode::storage::simulate::{parse_script, random_script, ScriptEvent, Simulator};
use std::time::{Duration, Instant};

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combos(n - 1, k);
    for mut c in combos(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn random_symbols(rng: &mut ChaCha8Rng, len: u128, q: u32) -> Vec<u16> {
    (0..usize::try_from(len).unwrap())
        .map(|_| (rng.gen::<u32>() % q) as u16)
        .collect()
}

/// |computed − printed| < one unit in the last printed decimal place
/// (covers both rounding and truncation in the published figures).
fn matches_printed(computed: f64, printed: f64, decimals: i32) -> bool {
    (computed - printed).abs() < 10f64.powi(-decimals)
}

fn ratio_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

const GB: f64 = 1e9;
const TB: f64 = 1e12;
const KB: f64 = 1e3;
const MB: f64 = 1e6;

fn bits_to_bytes(bits: u128) -> f64 {
    bits as f64 / 8.0
}

// ---------------------------------------------------------------------------
// criterion 1 — bandwidth-optimal rate regression, four published rows
// ---------------------------------------------------------------------------
#[test]
fn c01_nmbr_rate_regression() {
    let start = Instant::now();
    // (n, k, d, b, printed nmbr rate @dp, printed pm rate @dp,
    //  printed nmbr B (value, unit, dp), printed pm B (value, unit, dp))
    let rows: [(u64, u64, u64, u64, (f64, i32), (f64, i32), (f64, f64, i32), (f64, f64, i32)); 4] = [
        (30, 20, 20, 200_000, (0.33, 2), (0.35, 2), (2.5, GB, 1), (2.625, GB, 3)),
        (26, 22, 24, 368_500, (0.4583, 4), (0.4759, 4), (10.03, GB, 2), (10.41, GB, 2)),
        (260, 220, 240, 3_684_780, (0.4583, 4), (0.4601, 4), (1.002, TB, 3), (1.006, TB, 3)),
        (2600, 2200, 2400, 36_854_400, (0.4583, 4), (0.4585, 4), (100.32, TB, 2), (100.36, TB, 2)),
    ];
    for (n, k, d, b, nmbr_rate, pm_rate, nmbr_b, pm_b) in rows {
        let params = NmbrParams::validate(n, k, d, 2, b, NmbrEncoding::Plain).unwrap();
        let m = params.metrics();
        let rate = ratio_f64(&m.rate);
        assert!(
            matches_printed(rate, nmbr_rate.0, nmbr_rate.1),
            "row (n={n}): nmbr rate {rate} vs printed {}",
            nmbr_rate.0
        );
        let b_val = bits_to_bytes(m.file_symbols) / nmbr_b.1;
        assert!(
            matches_printed(b_val, nmbr_b.0, nmbr_b.2),
            "row (n={n}): nmbr B {b_val} vs printed {}",
            nmbr_b.0
        );
        // reference columns under the binary framework
        let (ni, ki, di, bi) = (n as i128, k as i128, d as i128, b as i128);
        let pm_rate_exact = Ratio::new(ki * (2 * di - ki + 1), 2 * di * ni);
        assert!(
            matches_printed(ratio_f64(&pm_rate_exact), pm_rate.0, pm_rate.1),
            "row (n={n}): pm rate vs printed"
        );
        let pm_bits = Ratio::new(bi * bi * (2 * di - ki + 1), 2 * ki);
        let pm_val = ratio_f64(&pm_bits) / 8.0 / pm_b.1;
        assert!(
            matches_printed(pm_val, pm_b.0, pm_b.2),
            "row (n={n}): pm B {pm_val} vs printed {}",
            pm_b.0
        );
    }
    // row 1 α and β are printed exactly: 250 MB and 12.5 MB
    let p = NmbrParams::validate(30, 20, 20, 2, 200_000, NmbrEncoding::Plain).unwrap();
    assert_eq!(bits_to_bytes(p.alpha()), 250.0 * MB);
    assert_eq!(bits_to_bytes(p.beta()), 12.5 * MB);
    // the exact-rational identities behind the table
    assert_eq!(p.metrics().rate, p.rate_closed_form());
    assert!(start.elapsed() < Duration::from_secs(1), "criterion 1 runtime");
    println!("criterion 1: PASS — all four published bandwidth-optimal rows reproduced");
}

// ---------------------------------------------------------------------------
// criterion 2 — storage-optimal rate regression, four published rows
// ---------------------------------------------------------------------------
#[test]
fn c02_nmsr_rate_regression() {
    let start = Instant::now();
    // row 1 is exact
    let p = NmsrParams::validate(20, 10, 2, 2000).unwrap();
    let m = p.metrics();
    assert_eq!(m.rate, Ratio::new(45025, 100_000), "rate 0.45025 exactly");
    assert_eq!(m.file_symbols, 3_241_800, "405.225 KB = 3 241 800 bits exactly");
    assert_eq!(bits_to_bytes(m.file_symbols), 405.225 * KB);
    let pm_rate = Ratio::new(10i128, 20);
    assert_eq!(pm_rate, Ratio::new(1, 2), "pm rate 0.5");
    let lg = regencode::storage::tables::ceil_log2(20 * 9) as i128; // 180 → 8
    assert_eq!(lg, 8);
    assert_eq!(pm_rate / lg, Ratio::new(1, 16), "epm rate 0.0625");
    let pm_bits: i128 = 2000 * 2000 * 9 / 10;
    assert_eq!(pm_bits, 3_600_000);
    assert_eq!(pm_bits / lg, 450_000, "epm B = 56.25 KB");

    // remaining rows to printed precision
    let rows: [(u64, u64, u64, (f64, i32), (f64, f64, i32), (f64, f64, i32), (f64, f64, i32), i128); 3] = [
        // (n, k, b, nmsr rate, nmsr B, pm B, epm B, ⌈log₂ n(k−1)⌉)
        (100, 40, 48_000, (0.39, 2), (0.27, GB, 2), (0.28, GB, 2), (0.02, GB, 2), 12),
        (100, 40, 240_000, (0.39, 2), (6.84, GB, 2), (7.02, GB, 2), (0.585, GB, 3), 12),
        (1000, 400, 76_000, (0.39, 2), (0.718, GB, 3), (0.72, GB, 2), (37.9, MB, 1), 19),
    ];
    for (n, k, b, rate_p, b_p, pm_p, epm_p, lg) in rows {
        let p = NmsrParams::validate(n, k, 2, b).unwrap();
        let m = p.metrics();
        let rate = ratio_f64(&m.rate);
        assert!(matches_printed(rate, rate_p.0, rate_p.1), "(n={n},b={b}) rate {rate}");
        let b_val = bits_to_bytes(m.file_symbols) / b_p.1;
        assert!(matches_printed(b_val, b_p.0, b_p.2), "(n={n},b={b}) B {b_val}");
        assert_eq!(regencode::storage::tables::ceil_log2(n * (k - 1)) as i128, lg);
        let pm_bits = Ratio::new((b * b * (k - 1)) as i128, k as i128);
        let pm_val = ratio_f64(&pm_bits) / 8.0 / pm_p.1;
        assert!(matches_printed(pm_val, pm_p.0, pm_p.2), "(n={n},b={b}) pm B {pm_val}");
        let epm_val = ratio_f64(&(pm_bits / lg)) / 8.0 / epm_p.1;
        assert!(matches_printed(epm_val, epm_p.0, epm_p.2), "(n={n},b={b}) epm B {epm_val}");
        // pm/epm rates: k/n and (k/n)/⌈log⌉
        let pm_rate = Ratio::new(k as i128, n as i128);
        assert!(matches_printed(ratio_f64(&pm_rate), 0.4, 1));
        assert!(matches_printed(ratio_f64(&(pm_rate / lg)), if lg == 12 { 0.033 } else { 0.02 }, 2));
    }
    assert!(start.elapsed() < Duration::from_secs(1), "criterion 2 runtime");
    println!("criterion 2: PASS — all four published storage-optimal rows reproduced, row 1 exact");
}

// ---------------------------------------------------------------------------
// criterion 3 — exhaustive bandwidth-optimal correctness at desk scale
// ---------------------------------------------------------------------------

/// Every k-subset reconstructs and every (failed node, d-subset) repairs,
/// exactly.
fn nmbr_full_sweep(code: &NmbrCode, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = code.params();
    let file = random_symbols(&mut rng, params.file_symbols(), params.field.modulus());
    let shares = code.encode(&file).unwrap();
    let n = params.n as usize;
    for subset in combos(n, params.k as usize) {
        let picked: Vec<NodeShare> = subset.iter().map(|&j| shares[j].clone()).collect();
        assert_eq!(code.reconstruct(&picked).unwrap(), file, "reconstruct {subset:?}");
    }
    for failed in 0..n {
        let survivors: Vec<usize> = (0..n).filter(|&j| j != failed).collect();
        for subset in combos(survivors.len(), params.d as usize) {
            let packets: Vec<RepairPacket> = subset
                .iter()
                .map(|&si| code.repair_helper(&shares[survivors[si]], failed as u32 + 1).unwrap())
                .collect();
            assert_eq!(
                code.repair_assemble(&packets).unwrap(),
                shares[failed],
                "repair {failed} from {subset:?}"
            );
        }
    }
}

#[test]
fn c03_nmbr_exhaustive_correctness() {
    let start = Instant::now();
    let code = NmbrCode::new(NmbrParams::validate(4, 2, 3, 2, 4, NmbrEncoding::Plain).unwrap()).unwrap();
    nmbr_full_sweep(&code, 0xaa);
    println!("criterion 3: instance (n=4,k=2,d=3,q=2,b=4) sweep exact");

    // Second stated instance. (n=5,k=2,d=4,q=2,b=4) needs five distinct
    // evaluation points in F_{2^{b/k}} = F_4, which has four elements, so
    // admission condition A1 rejects it and no assignment of node rows can
    // make every subset invertible. Attempted faithfully; the sweep on the
    // nearest valid instance lives in `supplementary_nmbr_d4_sweep`.
    let second = NmbrParams::validate(5, 2, 4, 2, 4, NmbrEncoding::Plain);
    assert!(start.elapsed() < Duration::from_secs(10), "criterion 3 runtime");
    match second {
        Ok(p) => {
            let code = NmbrCode::new(p).unwrap();
            nmbr_full_sweep(&code, 0xab);
            println!("criterion 3: PASS — both instances swept exactly");
        }
        Err(e) => {
            println!("criterion 3: FAIL — second instance (n=5,k=2,d=4,q=2,b=4) is not admissible: {e}");
            panic!(
                "criterion 3 second instance is unattainable: q^(b/k) = 4 < n = 5 \
                 (A1), so two of the five node rows would coincide and the sweep \
                 cannot succeed; see supplementary_nmbr_d4_sweep for the valid \
                 (n=5,k=2,d=4,q=2,b=6) variant. error: {e}"
            );
        }
    }
}

/// Non-criterion supplement: the d = 2k reconstruction path swept on the
/// nearest admissible instance of criterion 3's second parameter set.
#[test]
fn supplementary_nmbr_d4_sweep() {
    let code = NmbrCode::new(NmbrParams::validate(5, 2, 4, 2, 6, NmbrEncoding::Plain).unwrap()).unwrap();
    nmbr_full_sweep(&code, 0xac);
    println!("supplementary: (n=5,k=2,d=4,q=2,b=6) sweep exact");
}

// ---------------------------------------------------------------------------
// criterion 4 — exhaustive storage-optimal correctness at desk scale
// ---------------------------------------------------------------------------
#[test]
fn c04_nmsr_exhaustive_correctness() {
    let start = Instant::now();
    let params = NmsrParams::validate(6, 3, 2, 18).unwrap();
    assert_eq!(params.alpha(), 72);
    assert_eq!(params.beta(), 36);
    assert_eq!(params.file_symbols(), 156);
    assert_eq!(params.metrics().b_over_alpha_k, Ratio::new(13, 18));
    let code = NmsrCode::new(params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4);
    let file = random_symbols(&mut rng, 156, 2);
    let shares = code.encode(&file).unwrap();
    let mut reconstructions = 0;
    for subset in combos(6, 3) {
        let picked: Vec<NodeShare> = subset.iter().map(|&j| shares[j].clone()).collect();
        assert_eq!(code.reconstruct(&picked).unwrap(), file, "reconstruct {subset:?}");
        reconstructions += 1;
    }
    assert_eq!(reconstructions, 20); // C(6,3)
    let mut repairs = 0;
    for failed in 0..6usize {
        let survivors: Vec<usize> = (0..6).filter(|&j| j != failed).collect();
        for subset in combos(5, 4) {
            let packets: Vec<RepairPacket> = subset
                .iter()
                .map(|&si| code.repair_helper(&shares[survivors[si]], failed as u32 + 1).unwrap())
                .collect();
            assert_eq!(code.repair_assemble(&packets).unwrap(), shares[failed]);
            repairs += 1;
        }
    }
    assert_eq!(repairs, 30); // 6·C(5,4)
    assert!(start.elapsed() < Duration::from_secs(60), "criterion 4 runtime");
    println!("criterion 4: PASS — 20 reconstructions and 30 repairs exact; α=72 β=36 B=156 B/(αk)=13/18");
}

// ---------------------------------------------------------------------------
// criterion 5 — puncturing
// ---------------------------------------------------------------------------
#[test]
fn c05_puncturing() {
    let start = Instant::now();
    let parent = NmsrCode::new(NmsrParams::validate(6, 3, 2, 18).unwrap()).unwrap();
    let parent_ratio = parent.params().metrics().b_over_alpha_k;
    let child = PuncturedNmsr::new(parent).unwrap();
    assert_eq!((child.n(), child.k(), child.d()), (5, 2, 3));
    assert_eq!(child.file_symbols(), 84);

    let mut rng = ChaCha8Rng::seed_from_u64(0xc5);
    let file = random_symbols(&mut rng, 84, 2);
    let shares = child.encode(&file).unwrap();
    for subset in combos(5, 2) {
        let picked: Vec<NodeShare> = subset.iter().map(|&j| shares[j].clone()).collect();
        assert_eq!(child.reconstruct(&picked).unwrap(), file, "child reconstruct {subset:?}");
    }
    for failed in 0..5usize {
        let survivors: Vec<usize> = (0..5).filter(|&j| j != failed).collect();
        for subset in combos(4, 3) {
            let packets: Vec<RepairPacket> = subset
                .iter()
                .map(|&si| child.repair_helper(&shares[survivors[si]], failed as u32 + 1).unwrap())
                .collect();
            assert_eq!(child.repair_assemble(&packets).unwrap(), shares[failed]);
        }
    }
    println!("criterion 5: child (n=5,k=2,d=3,B=84) exhaustive sweep exact");
    assert!(start.elapsed() < Duration::from_secs(60), "criterion 5 runtime");

    // Final clause as stated: child B/(αk) > parent B/(αk). With
    // B_child = B_parent − α and α, β preserved, algebra gives
    //   1 − r_child = (1 − r_parent) · k′/(k′−1),
    // so the child ratio is strictly smaller whenever the parent sits below
    // 1 — here 84/144 = 7/12 < 156/216 = 13/18. The adjacent true statement
    // (the child beats the unpunctured family at its own k and b:
    // 7/12 > 1 − 1/2 + 1/18 = 5/9 + overhead) is covered in
    // `supplementary_puncture_ratio`.
    let child_ratio = child.b_over_alpha_k();
    if child_ratio > parent_ratio {
        println!("criterion 5: PASS — ratio comparison holds");
    } else {
        println!(
            "criterion 5: FAIL — child B/(αk) = {child_ratio} is not greater than parent {parent_ratio}"
        );
        panic!(
            "criterion 5 ratio clause is unattainable: child {child_ratio} < parent {parent_ratio} \
             for every parameter set, since 1 − r_child = (1 − r_parent)·k′/(k′−1)"
        );
    }
}

/// Non-criterion supplement: the operational content of the puncturing
/// improvement — the child lies above the unpunctured family evaluated at
/// the child's own (k, b), and the deficit identity holds exactly.
#[test]
fn supplementary_puncture_ratio() {
    let parent = NmsrCode::new(NmsrParams::validate(6, 3, 2, 18).unwrap()).unwrap();
    let parent_ratio = parent.params().metrics().b_over_alpha_k;
    let child = PuncturedNmsr::new(parent).unwrap();
    let child_ratio = child.b_over_alpha_k();
    assert_eq!(
        Ratio::from_integer(1) - child_ratio,
        (Ratio::from_integer(1) - parent_ratio) * Ratio::new(3, 2)
    );
    let base_family_at_child = Ratio::from_integer(1) - Ratio::new(1, 2) + Ratio::new(1, 18);
    assert!(child_ratio > base_family_at_child);
    println!(
        "supplementary: child {child_ratio} beats the unpunctured family's {base_family_at_child} at k=2, b=18"
    );
}

// ---------------------------------------------------------------------------
// criterion 6 — Stein solver against the forward oracle
// ---------------------------------------------------------------------------
#[test]
fn c06_stein_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc6);
    let mut solved = 0;
    let mut guard = 0;
    while solved < 100 {
        guard += 1;
        assert!(guard < 10_000, "singular systems should be rare");
        let q = if solved % 2 == 0 { 2 } else { 5 };
        let field = PrimeField::new(q).unwrap();
        let m = 1 + rng.gen_range(0..6);
        let rand_mat = |rng: &mut ChaCha8Rng| {
            GfMatrix::from_fn(field, m, m, |_, _| (rng.gen::<u32>() % q as u32) as u16)
        };
        let a = rand_mat(&mut rng);
        let b = rand_mat(&mut rng);
        let x0 = rand_mat(&mut rng);
        // Lemma-7 identity verbatim on every sampled triple
        let lhs = a.matmul(&x0).unwrap().matmul(&b).unwrap().sub(&x0).unwrap().vect();
        let sys = b
            .transpose()
            .kron(&a)
            .unwrap()
            .sub(&GfMatrix::identity(field, m * m))
            .unwrap();
        assert_eq!(lhs, sys.matmul(&x0.vect()).unwrap(), "vectorization identity");
        // oracle: forward-evaluate, then the solver must return x0 exactly
        let c = a.matmul(&x0).unwrap().matmul(&b).unwrap().sub(&x0).unwrap();
        match solve_stein(&a, &b, &c) {
            Ok(x) => {
                assert_eq!(x, x0, "unique solution equals the seeded matrix");
                solved += 1;
            }
            Err(LinalgError::SingularStein) => continue,
            Err(e) => panic!("unexpected solver error {e}"),
        }
    }
    println!("criterion 6: PASS — 100 Stein round-trips exact, vectorization identity verbatim");
}

// ---------------------------------------------------------------------------
// criterion 7 — extension-field representation
// ---------------------------------------------------------------------------

/// Matrices over F_{q^m} in coefficient-vector form; an implementation-
/// independent oracle (polynomial arithmetic only, no Θ or GfMatrix in the
/// product path).
struct ExtMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExtElem>,
}

impl ExtMatrix {
    fn random(rng: &mut ChaCha8Rng, rep: &ExtFieldRep, rows: usize, cols: usize) -> Self {
        let q = rep.field().modulus() as u64;
        let size = q.pow(rep.degree() as u32);
        let data = (0..rows * cols)
            .map(|_| rep.element_from_index(rng.gen_range(0..size)))
            .collect();
        ExtMatrix { rows, cols, data }
    }

    fn at(&self, r: usize, c: usize) -> &ExtElem {
        &self.data[r * self.cols + c]
    }

    fn mul(&self, rep: &ExtFieldRep, other: &ExtMatrix) -> ExtMatrix {
        assert_eq!(self.cols, other.rows);
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = rep.ext_zero();
                for t in 0..self.cols {
                    acc = rep.ext_add(&acc, &rep.ext_mul(self.at(i, t), other.at(t, j)));
                }
                data.push(acc);
            }
        }
        ExtMatrix { rows: self.rows, cols: other.cols, data }
    }

    fn grid(&self) -> Vec<Vec<ExtElem>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }

    /// Gaussian elimination over F_{q^m} via coefficient arithmetic.
    fn is_invertible(&self, rep: &ExtFieldRep) -> bool {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut w = self.grid();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !rep.ext_is_zero(&w[r][col])) else {
                return false;
            };
            w.swap(col, pivot);
            let inv = rep.ext_inv(&w[col][col]).unwrap();
            for r in col + 1..n {
                if rep.ext_is_zero(&w[r][col]) {
                    continue;
                }
                let factor = rep.ext_mul(&w[r][col], &inv);
                for c in col..n {
                    let sub = rep.ext_mul(&factor, &w[col][c]);
                    w[r][c] = rep.ext_sub(&w[r][c], &sub);
                }
            }
        }
        true
    }
}

#[test]
fn c07_extension_field_representation() {
    let field = PrimeField::new(2).unwrap();
    for m in [2usize, 3, 4, 6] {
        let rep = ExtFieldRep::new(field, m, 8).unwrap();
        // multiplicative order of P is exactly q^m − 1
        let order = rep.order();
        let id = GfMatrix::identity(field, m);
        let p = rep.power(1);
        let mut acc = id.clone();
        for e in 1..order {
            acc = acc.matmul(&p).unwrap();
            assert_ne!(acc, id, "P^{e} = I early at m={m}");
        }
        assert_eq!(acc.matmul(&p).unwrap(), id, "P^(q^m−1) = I at m={m}");

        let mut rng = ChaCha8Rng::seed_from_u64(0xc7 + m as u64);
        for trial in 0..100 {
            // Θ multiplicativity on random rectangular pairs
            let s = 1 + rng.gen_range(0..3);
            let t = 1 + rng.gen_range(0..3);
            let l = 1 + rng.gen_range(0..3);
            let a = ExtMatrix::random(&mut rng, &rep, s, t);
            let b = ExtMatrix::random(&mut rng, &rep, t, l);
            let prod = a.mul(&rep, &b);
            let lhs = rep.theta_big(&prod.grid()).unwrap();
            let rhs = rep
                .theta_big(&a.grid())
                .unwrap()
                .matmul(&rep.theta_big(&b.grid()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "Θ(AB) = Θ(A)Θ(B) at m={m} trial={trial}");

            // Θ of an invertible matrix is invertible
            let square = ExtMatrix::random(&mut rng, &rep, t, t);
            if square.is_invertible(&rep) {
                assert!(
                    rep.theta_big(&square.grid()).unwrap().invert().is_ok(),
                    "Θ(A) invertible for invertible A at m={m}"
                );
            }
        }
    }
    println!("criterion 7: PASS — Θ multiplicativity, Θ-invertibility, and exact P order for m ∈ {{2,3,4,6}}");
}

// ---------------------------------------------------------------------------
// criterion 8 — bandwidth identities and seeded reproducibility
// ---------------------------------------------------------------------------
#[test]
fn c08_bandwidth_identities() {
    let stripes = 3usize;
    let make = || StripeCodec::from_spec(CodeKind::Nmbr, 4, 2, Some(3), 2, 4).unwrap();
    let codec = make();
    let (d, k) = (codec.d() as u128, codec.k() as u128);
    let (alpha, beta) = (codec.alpha(), codec.beta());
    assert_eq!(d * beta, alpha, "minimum-bandwidth point: α = dβ");

    // every simulated repair transfers exactly stripes·d·β symbols
    let script = parse_script("fail 3\nrepair 3 from 1,2,4\nfail 1\nrepair 1 from 2,3,4\n").unwrap();
    let report = Simulator::new(make(), stripes, 7).unwrap().run(&script).unwrap();
    assert_eq!(report.failed_events, 0, "{}", report.render());
    for entry in &report.ledger.entries {
        assert_eq!(entry.operation, Operation::Repair);
        assert_eq!(entry.symbols, stripes as u128 * d * beta);
    }

    // 20-event seeded script: ledger totals match the analytic counts and
    // the whole run reproduces bit-for-bit
    let script = random_script(4, 2, 3, 20, 0xc8);
    assert_eq!(script.len(), 20);
    let repairs = script.iter().filter(|e| matches!(e, ScriptEvent::Repair { .. })).count() as u128;
    let recons = script
        .iter()
        .filter(|e| matches!(e, ScriptEvent::Reconstruct { .. }))
        .count() as u128;
    let run_a = Simulator::new(make(), stripes, 0xc8).unwrap().run(&script).unwrap();
    let run_b = Simulator::new(make(), stripes, 0xc8).unwrap().run(&script).unwrap();
    assert_eq!(run_a.failed_events, 0, "{}", run_a.render());
    assert_eq!(run_a.ledger, run_b.ledger, "seed-reproducible ledgers");
    assert_eq!(run_a.render(), run_b.render(), "seed-reproducible reports");
    assert_eq!(
        run_a.ledger.total_for(Operation::Repair),
        repairs * stripes as u128 * d * beta,
        "repair traffic = repairs·stripes·d·β"
    );
    assert_eq!(
        run_a.ledger.total_for(Operation::Reconstruct),
        recons * stripes as u128 * k * alpha,
        "reconstruction traffic = reconstructions·stripes·k·α"
    );
    println!("criterion 8: PASS — dβ = α, per-event dβ accounting, analytic totals, seed-reproducible");
}

// ---------------------------------------------------------------------------
// criterion 9 — coset collision must surface, not be absorbed
// ---------------------------------------------------------------------------
#[test]
fn c09_coset_collision_negative() {
    let params = NmsrParams::validate(6, 3, 2, 18).unwrap();
    // i₃ := 2·i₂ mod 63 puts nodes 2 and 3 in one 2-cyclotomic coset while
    // keeping all indices distinct, so encode and repair still work
    let code = NmsrCode::with_indices_unchecked(params, vec![0, 1, 2, 5, 7, 9]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc9);
    let file = random_symbols(&mut rng, code.params().file_symbols(), 2);
    let shares = code.encode(&file).unwrap();
    let picked = vec![shares[1].clone(), shares[2].clone(), shares[4].clone()];
    match code.reconstruct(&picked) {
        Err(CodecError::CosetCollision { a: 1, b: 2 }) => {}
        other => panic!("expected CosetCollision from indices 1 and 2, got {other:?}"),
    }
    // sanity: a subset avoiding the collision still reconstructs
    let clean = vec![shares[0].clone(), shares[3].clone(), shares[4].clone()];
    assert_eq!(code.reconstruct(&clean).unwrap(), file);
    println!("criterion 9: PASS — colliding cosets raise CosetCollision; disjoint subsets still decode");
}

// ---------------------------------------------------------------------------
// criterion 10 — cross-run determinism of the on-disk artifacts
// ---------------------------------------------------------------------------
#[test]
fn c10_cross_run_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.bin");
    let mut rng = ChaCha8Rng::seed_from_u64(0xca);
    let payload: Vec<u8> = (0..3000).map(|_| rng.gen()).collect();
    std::fs::write(&input, &payload).unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        cmd_encode(&input, CodeKind::Nmsr, 6, 3, None, 2, 18, out).unwrap();
    }
    let manifest_a = std::fs::read(out_a.join("manifest.json")).unwrap();
    let manifest_b = std::fs::read(out_b.join("manifest.json")).unwrap();
    assert_eq!(manifest_a, manifest_b, "manifests byte-identical");
    for node in 1..=6u32 {
        let name = format!("share_{node:04}.bin");
        let a = std::fs::read(out_a.join(&name)).unwrap();
        let b = std::fs::read(out_b.join(&name)).unwrap();
        assert_eq!(a, b, "share {node} byte-identical");
    }
    println!("criterion 10: PASS — two independent encodes are byte-identical");
}
