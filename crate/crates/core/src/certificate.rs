//! Self-contained JSON certificates and their replay.
//!
//! A certificate embeds its instance, so replay needs no other input.
//! Replay checks the witness against the instance with the pure predicates
//! and confirms the stated verdict, whichever way it went. Counting claims
//! carry digests that replay recomputes.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{index_relations, BoundFact, DerivedBound};
use crate::budget::{Budget, Coverage};
use crate::exact::rational::vectors_from_json;
use crate::family::{build_board, compare_raw, verify_lemma_family, FamilyParams, LemmaReport, Mode, ShapeSummary};
use crate::geometry::config::PointConfig;
use crate::geometry::divisible::{
    bipartition_count, check_refutation, common_point, is_k_divisible, is_s_k_divisible, refute_partition,
    Divisibility, Refutation, SDivisibility,
};
use crate::geometry::gale::{gale_inverse, gale_transform, is_gale_diagram_of, radon_partition, GaleDiagram};
use crate::geometry::hull::{zero_in_hull, HullMembership, Hyperplane, Partition};
use crate::geometry::neighbourly::{affine_circuit, neighbourly_report, AffineCircuit};
use crate::geometry::projective::{apply_projective, projective_from_signs, realizes_signs, ProjectiveMap};
use crate::geometry::signflip::{find_sign_flip, satisfies_flip, signs_of_mask};
use crate::matroid::{ReorientationSet, Sign, SignMatrix};
use crate::travel::{
    acyclic_reorientation_classes, bottom_travel, is_cyclic_travel, plain_travels, top_travel,
    travel_to_reorientation, Travel, TravelKind,
};
use crate::{Error, Result};

pub const SCHEMA: &str = "v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub claim: String,
    pub instance: Value,
    pub witness: Value,
    pub verified: bool,
    pub coverage: Coverage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub runtime_ms: u64,
}

impl Certificate {
    fn new(claim: &str, instance: Value, witness: Value, verified: bool, coverage: Coverage, started: Instant) -> Self {
        Certificate {
            schema: SCHEMA.into(),
            claim: claim.into(),
            instance,
            witness,
            verified,
            coverage,
            seed: None,
            runtime_ms: started.elapsed().as_millis() as u64,
        }
    }

    fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    /// One JSON line, keys in sorted order.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&serde_json::to_value(self).expect("certificates serialize")).expect("values serialize")
    }

    /// The JSON value with `runtime_ms` removed, for determinism checks.
    pub fn comparable(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("certificates serialize");
        v.as_object_mut().expect("object").remove("runtime_ms");
        v
    }
}

/// Parses a stream of certificates: a JSON array, or concatenated /
/// newline-separated JSON objects.
pub fn parse_stream(text: &str) -> Result<Vec<Certificate>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    serde_json::Deserializer::from_str(text).into_iter::<Certificate>().map(|c| c.map_err(Error::from)).collect()
}

fn schema_err(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema_err(format!("missing field {key:?}")))
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    serde_json::from_value(field(v, key)?.clone()).map_err(|e| schema_err(format!("field {key:?}: {e}")))
}

fn mode_parts(mode: Mode) -> (Value, Option<u64>) {
    (serde_json::to_value(mode).expect("mode serializes"), match mode {
        Mode::Exhaustive => None,
        Mode::Sampled { seed, .. } => Some(seed),
    })
}

fn matrix_json(m: &SignMatrix) -> Value {
    json!(m.to_text().lines().collect::<Vec<_>>())
}

fn matrix_from_json(v: &Value) -> Result<SignMatrix> {
    let lines: Vec<String> = serde_json::from_value(v.clone()).map_err(|e| schema_err(format!("matrix: {e}")))?;
    lines.join("\n").parse()
}

fn partition_json(p: &Partition) -> Value {
    json!({ "a": p.a(), "b": p.b() })
}

fn partition_from_json(v: &Value, n: usize) -> Result<Partition> {
    let a: BTreeSet<usize> = parse(v, "a")?;
    let b: BTreeSet<usize> = parse(v, "b")?;
    let p = Partition::new(n, a).map_err(|e| schema_err(e.to_string()))?;
    if p.b() != &b {
        return Err(schema_err("partition sides do not complement each other"));
    }
    Ok(p)
}

fn signs_json(e: &[Sign]) -> Value {
    json!(e.iter().map(|s| s.to_i8()).collect::<Vec<_>>())
}

fn signs_from_json(v: &Value) -> Result<Vec<Sign>> {
    let raw: Vec<i8> = serde_json::from_value(v.clone()).map_err(|e| schema_err(format!("signs: {e}")))?;
    raw.into_iter().map(|s| Sign::from_i8(s).ok_or_else(|| schema_err(format!("sign {s} is not ±1")))).collect()
}

fn matrices(rows: usize, cols: usize, mode: Mode) -> Result<(Vec<u64>, u64)> {
    if rows * cols > 24 {
        return Err(Error::input("matrix enumeration supports at most 24 entries"));
    }
    let total = 1u64 << (rows * cols);
    Ok(match mode {
        Mode::Exhaustive => ((0..total).collect(), total),
        Mode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            ((0..count).map(|_| rng.gen_range(0..total)).collect(), count)
        }
    })
}

// ---------------------------------------------------------------------------
// Travel criteria over all matrices of a shape.

const DIGEST_CHUNK: usize = 1 << 12;

/// Feeds chunks of `codes` to `step` until the case limit or the deadline,
/// returning how many codes were consumed.
fn run_chunks(codes: &[u64], budget: &Budget, mut step: impl FnMut(&[u64]) -> Result<()>) -> Result<usize> {
    let limit = budget.case_limit(codes.len() as u64) as usize;
    let mut done = 0;
    while done < limit && !budget.expired() {
        let end = (done + DIGEST_CHUNK).min(limit);
        step(&codes[done..end])?;
        done = end;
    }
    Ok(done)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct LlomDigest {
    cyclic: u64,
    acyclic: u64,
    disagreements: Vec<u64>,
}

fn llom_digest(rows: usize, cols: usize, codes: &[u64]) -> Result<LlomDigest> {
    let verdicts: Vec<std::result::Result<bool, u64>> = codes
        .par_iter()
        .map(|&c| {
            let m = SignMatrix::from_bits(rows, cols, c).expect("shape checked");
            match is_cyclic_travel(&m) {
                Ok(cyc) if cyc == !m.is_acyclic_bruteforce() => Ok(cyc),
                _ => Err(c),
            }
        })
        .collect();
    let mut d = LlomDigest { cyclic: 0, acyclic: 0, disagreements: Vec::new() };
    for v in verdicts {
        match v {
            Ok(true) => d.cyclic += 1,
            Ok(false) => d.acyclic += 1,
            Err(c) => d.disagreements.push(c),
        }
    }
    Ok(d)
}

/// Travel verdict against circuit enumeration on every (or every sampled)
/// matrix of the shape. Matrices are bit codes, bit `(i-1)n + j-1` set for `-1`.
pub fn prop_llom(rows: usize, cols: usize, mode: Mode, budget: &Budget) -> Result<Certificate> {
    let started = Instant::now();
    let (codes, total) = matrices(rows, cols, mode)?;
    let mut d = LlomDigest { cyclic: 0, acyclic: 0, disagreements: Vec::new() };
    let limit = run_chunks(&codes, budget, |chunk| {
        let part = llom_digest(rows, cols, chunk)?;
        d.cyclic += part.cyclic;
        d.acyclic += part.acyclic;
        d.disagreements.extend(part.disagreements);
        Ok(())
    })?;
    let (mode_v, seed) = mode_parts(mode);
    let coverage = Coverage { checked: limit as u64, total };
    let verified = coverage.is_complete() && d.disagreements.is_empty();
    let instance = json!({ "rows": rows, "cols": cols, "mode": mode_v });
    Ok(Certificate::new("prop-llom", instance, serde_json::to_value(d)?, verified, coverage, started).with_seed(seed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PtDigest {
    travels: u64,
    classes: u64,
    mismatches: Vec<u64>,
}

fn pt_digest(rows: usize, cols: usize, codes: &[u64]) -> Result<PtDigest> {
    let per: Vec<Result<(u64, u64, bool)>> = codes
        .par_iter()
        .map(|&c| {
            let m = SignMatrix::from_bits(rows, cols, c)?;
            let classes = acyclic_reorientation_classes(&m);
            let travels = plain_travels(&m);
            let images: Vec<ReorientationSet> =
                travels.iter().map(|t| travel_to_reorientation(&m, t)).collect::<Result<_>>()?;
            let distinct: BTreeSet<&ReorientationSet> = images.iter().collect();
            let acyclic = images.iter().all(|s| m.reorient(s).map(|r| r.is_acyclic_bruteforce()).unwrap_or(false));
            let ok = travels.len() == classes.len() && distinct.len() == images.len() && acyclic;
            Ok((travels.len() as u64, classes.len() as u64, ok))
        })
        .collect();
    let mut d = PtDigest { travels: 0, classes: 0, mismatches: Vec::new() };
    for (c, r) in codes.iter().zip(per) {
        let (t, k, ok) = r?;
        d.travels += t;
        d.classes += k;
        if !ok {
            d.mismatches.push(*c);
        }
    }
    Ok(d)
}

/// Plain travels against acyclic reorientation classes, with the closed
/// form bijection checked for injectivity and acyclic images.
pub fn prop_pt(rows: usize, cols: usize, mode: Mode, budget: &Budget) -> Result<Certificate> {
    let started = Instant::now();
    let (codes, total) = matrices(rows, cols, mode)?;
    let mut d = PtDigest { travels: 0, classes: 0, mismatches: Vec::new() };
    let limit = run_chunks(&codes, budget, |chunk| {
        let part = pt_digest(rows, cols, chunk)?;
        d.travels += part.travels;
        d.classes += part.classes;
        d.mismatches.extend(part.mismatches);
        Ok(())
    })?;
    let (mode_v, seed) = mode_parts(mode);
    let coverage = Coverage { checked: limit as u64, total };
    let verified = coverage.is_complete() && d.mismatches.is_empty();
    let instance = json!({ "rows": rows, "cols": cols, "mode": mode_v });
    Ok(Certificate::new("prop-pt", instance, serde_json::to_value(d)?, verified, coverage, started).with_seed(seed))
}

fn replay_digest(c: &Certificate) -> Result<bool> {
    let rows: usize = parse(&c.instance, "rows")?;
    let cols: usize = parse(&c.instance, "cols")?;
    let mode: Mode = parse(&c.instance, "mode")?;
    let (codes, total) = matrices(rows, cols, mode)?;
    if c.coverage.total != total || c.coverage.checked > total {
        return Ok(false);
    }
    let codes = &codes[..c.coverage.checked as usize];
    let (ok, clean) = if c.claim == "prop-llom" {
        let stated: LlomDigest = serde_json::from_value(c.witness.clone()).map_err(|e| schema_err(e.to_string()))?;
        let d = llom_digest(rows, cols, codes)?;
        (d == stated, d.disagreements.is_empty())
    } else {
        let stated: PtDigest = serde_json::from_value(c.witness.clone()).map_err(|e| schema_err(e.to_string()))?;
        let d = pt_digest(rows, cols, codes)?;
        (d == stated, d.mismatches.is_empty())
    };
    Ok(ok && c.verified == (clean && c.coverage.is_complete()))
}

// ---------------------------------------------------------------------------
// Chessboard families.

fn lemma_claim(p: &FamilyParams) -> &'static str {
    if p.k == 2 {
        "lemma-lbase"
    } else {
        "lemma-general"
    }
}

/// Every member of `CB(r,n,k)` (or a seeded sample) is cyclic or has a
/// cyclic reorientation of at most `k` columns.
pub fn lemma_family(p: FamilyParams, mode: Mode, budget: &Budget) -> Result<Certificate> {
    let started = Instant::now();
    let rep = verify_lemma_family(p, mode, budget)?;
    let fb = build_board(p)?;
    let (mode_v, seed) = mode_parts(mode);
    let instance = json!({ "params": p, "mode": mode_v, "board": fb.board.to_lines() });
    let witness = json!({
        "budget": p.k,
        "acyclic": rep.acyclic,
        "cyclic": rep.cyclic,
        "max_set_size": rep.max_set_size,
        "shapes": rep.shapes,
        "entries": rep.entries,
        "entries_complete": rep.entries_complete,
        "counterexamples": rep.counterexamples,
    });
    let verified = rep.verified();
    Ok(Certificate::new(lemma_claim(&p), instance, witness, verified, rep.coverage, started).with_seed(seed))
}

/// The shapes recorded in a lemma certificate.
pub fn lemma_shapes(c: &Certificate) -> Result<Vec<ShapeSummary>> {
    parse(&c.witness, "shapes")
}

/// The report fields of a lemma certificate.
pub fn lemma_report(c: &Certificate) -> Result<LemmaReport> {
    Ok(LemmaReport {
        params: parse(&c.instance, "params")?,
        mode: parse(&c.instance, "mode")?,
        coverage: c.coverage,
        cyclic: parse(&c.witness, "cyclic")?,
        acyclic: parse(&c.witness, "acyclic")?,
        max_set_size: parse(&c.witness, "max_set_size")?,
        shapes: parse(&c.witness, "shapes")?,
        entries: parse(&c.witness, "entries")?,
        entries_complete: parse(&c.witness, "entries_complete")?,
        counterexamples: parse(&c.witness, "counterexamples")?,
    })
}

fn replay_lemma(c: &Certificate) -> Result<bool> {
    let rep = lemma_report(c)?;
    let p = rep.params;
    let Ok(fb) = build_board(p) else { return Ok(false) };
    let board: Vec<String> = parse(&c.instance, "board")?;
    let budget: usize = parse(&c.witness, "budget")?;
    if board != fb.board.to_lines() || budget != p.k || c.claim != lemma_claim(&p) {
        return Ok(false);
    }
    if rep.entries.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Ok(false);
    }
    let shape_max = rep.shapes.iter().flat_map(|s| s.min_sets.iter().map(ReorientationSet::len)).max().unwrap_or(0);
    let consistent = rep.shapes.iter().map(|s| s.count).sum::<u64>() == rep.acyclic
        && rep.acyclic + rep.cyclic == rep.coverage.checked
        && shape_max == rep.max_set_size
        && rep.shapes.windows(2).all(|w| (&w[0].top, &w[0].bottom) < (&w[1].top, &w[1].bottom));
    if !consistent {
        return Ok(false);
    }
    let entries_ok = rep.entries.par_iter().all(|(code, s)| {
        let Ok(m) = fb.realization(*code) else { return false };
        let (top, bottom) = (top_travel(&m).breakpoints, bottom_travel(&m).breakpoints);
        let listed = rep.shapes.iter().any(|sh| sh.top == top && sh.bottom == bottom && sh.min_sets.contains(s));
        listed
            && s.len() <= p.k
            && s.check_within(m.cols()).is_ok()
            && matches!(is_cyclic_travel(&m), Ok(false))
            && m.reorient(s).is_ok_and(|r| matches!(is_cyclic_travel(&r), Ok(true)))
    });
    if !entries_ok {
        return Ok(false);
    }
    // The counts and shapes summarize every case, so they are recomputed.
    let recomputed = verify_lemma_family(p, rep.mode, &Budget::unlimited().with_max_cases(rep.coverage.checked))?;
    Ok(recomputed == rep && c.verified == rep.verified())
}

/// The normalized board of a family, with its invariants and the printed
/// formula comparison.
pub fn family_board(p: FamilyParams) -> Result<Certificate> {
    let started = Instant::now();
    let (witness, verified) = family_board_witness(p)?;
    Ok(Certificate::new("family-board", json!({ "params": p }), witness, verified, Coverage::complete(1), started))
}

fn family_board_witness(p: FamilyParams) -> Result<(Value, bool)> {
    let fb = build_board(p)?;
    let runs = fb.board.staircase_runs();
    let singles = runs.as_ref().map_or(0, |r| r.iter().filter(|(a, b)| a == b).count());
    let verified = fb.board.black_count() == p.n() - 1
        && runs.is_some()
        && fb.board.is_black(p.r - 1, p.n() - 1)
        && singles == p.k.saturating_sub(2).min(p.r - 1);
    let witness = json!({
        "n": p.n(),
        "board": fb.board.to_lines(),
        "black_cells": fb.board.black_cells(),
        "single_rows": p.single_rows(),
        "raw_formula": compare_raw(p)?,
    });
    Ok((witness, verified))
}

fn replay_family_board(c: &Certificate) -> Result<bool> {
    let p: FamilyParams = parse(&c.instance, "params")?;
    let Ok((w, verified)) = family_board_witness(p) else { return Ok(false) };
    Ok(w == c.witness && verified == c.verified)
}

// ---------------------------------------------------------------------------
// Travels of a single matrix.

pub fn travel(m: &SignMatrix, kind: TravelKind) -> Result<Certificate> {
    let started = Instant::now();
    let (witness, verified) = travel_witness(m, kind)?;
    let instance = json!({ "matrix": matrix_json(m), "kind": kind });
    Ok(Certificate::new("travel", instance, witness, verified, Coverage::complete(1), started))
}

fn travel_witness(m: &SignMatrix, kind: TravelKind) -> Result<(Value, bool)> {
    let cyclic = is_cyclic_travel(m)?;
    let agrees = m.cols() <= m.rows() || cyclic == !m.is_acyclic_bruteforce();
    Ok(match kind {
        TravelKind::Top | TravelKind::Bottom => {
            let t = if kind == TravelKind::Top { top_travel(m) } else { bottom_travel(m) };
            let entries = t.entries(m.rows(), m.cols());
            (json!({ "travel": t, "entries": entries, "cyclic": cyclic }), agrees)
        }
        TravelKind::Plain => {
            let ts = plain_travels(m);
            let images: Vec<ReorientationSet> = ts.iter().map(|t| travel_to_reorientation(m, t)).collect::<Result<_>>()?;
            let pairs: Vec<(Travel, ReorientationSet)> = ts.into_iter().zip(images.iter().cloned()).collect();
            let acyclic = images.iter().all(|s| m.reorient(s).is_ok_and(|r| r.is_acyclic_bruteforce()));
            let distinct = images.iter().collect::<BTreeSet<_>>().len() == images.len();
            (json!({ "travels": pairs, "cyclic": cyclic }), agrees && acyclic && distinct)
        }
    })
}

fn replay_travel(c: &Certificate) -> Result<bool> {
    let m = matrix_from_json(field(&c.instance, "matrix")?)?;
    let kind: TravelKind = parse(&c.instance, "kind")?;
    let (w, verified) = travel_witness(&m, kind)?;
    Ok(w == c.witness && verified == c.verified)
}

// ---------------------------------------------------------------------------
// Geometry.

fn refutation_json(r: &Refutation) -> Value {
    json!({
        "a": r.partition.a(),
        "b": r.partition.b(),
        "removed": r.removed,
        "hyperplane": r.hyperplane.to_json(),
    })
}

fn refutation_from_json(v: &Value, n: usize) -> Result<Refutation> {
    Ok(Refutation {
        partition: partition_from_json(v, n)?,
        removed: parse(v, "removed")?,
        hyperplane: Hyperplane::from_json(field(v, "hyperplane")?).map_err(|e| schema_err(e.to_string()))?,
    })
}

/// Searches for a bipartition that survives every `k`-removal.
pub fn k_divisible(x: &PointConfig, k: usize) -> Result<Certificate> {
    let started = Instant::now();
    let n = x.len();
    let instance = json!({ "points": x.to_json(), "k": k });
    let total = bipartition_count(n);
    Ok(match is_k_divisible(x, k)? {
        Divisibility::Divisible(p) => {
            let witness = json!({ "divisible": true, "partition": partition_json(&p) });
            Certificate::new("k-divisible", instance, witness, true, Coverage::complete(total), started)
        }
        Divisibility::NotDivisible(refs) => {
            let witness = json!({ "divisible": false, "refutations": refs.iter().map(refutation_json).collect::<Vec<_>>() });
            Certificate::new("k-divisible", instance, witness, false, Coverage::complete(total), started)
        }
    })
}

fn points_of(c: &Certificate) -> Result<PointConfig> {
    PointConfig::from_json(field(&c.instance, "points")?).map_err(|e| schema_err(e.to_string()))
}

fn replay_k_divisible(c: &Certificate) -> Result<bool> {
    let x = points_of(c)?;
    let k: usize = parse(&c.instance, "k")?;
    if !x.is_general_position() || k > x.len() {
        return Ok(false);
    }
    let divisible: bool = parse(&c.witness, "divisible")?;
    if divisible != c.verified {
        return Ok(false);
    }
    if divisible {
        let Ok(p) = partition_from_json(field(&c.witness, "partition")?, x.len()) else { return Ok(false) };
        return Ok(refute_partition(&x, &p, k).is_none());
    }
    let raw: Vec<Value> = parse(&c.witness, "refutations")?;
    let mut parts = BTreeSet::new();
    for v in &raw {
        let Ok(r) = refutation_from_json(v, x.len()) else { return Ok(false) };
        if !check_refutation(&x, &r, k) {
            return Ok(false);
        }
        let p = &r.partition;
        let canon = if p.a().contains(&1) { p.a().clone() } else { p.b().clone() };
        parts.insert(canon);
    }
    Ok(parts.len() as u64 == bipartition_count(x.len()) && raw.len() == parts.len())
}

pub fn s_k_divisible(x: &PointConfig, s: usize, k: usize, cap: u128) -> Result<Certificate> {
    let started = Instant::now();
    let instance = json!({ "points": x.to_json(), "s": s, "k": k });
    let total = crate::geometry::divisible::stirling2(x.len(), s) as u64;
    Ok(match is_s_k_divisible(x, s, k, cap)? {
        SDivisibility::Divisible(blocks) => {
            let witness = json!({ "divisible": true, "blocks": blocks });
            Certificate::new("s-k-divisible", instance, witness, true, Coverage::complete(total), started)
        }
        SDivisibility::NotDivisible { partitions_checked } => {
            let witness = json!({ "divisible": false, "partitions_checked": partitions_checked });
            Certificate::new("s-k-divisible", instance, witness, false, Coverage::complete(total), started)
        }
    })
}

/// A partial certificate for a search refused by its cap.
pub fn s_k_divisible_capped(x: &PointConfig, s: usize, k: usize, needed: u128) -> Certificate {
    let instance = json!({ "points": x.to_json(), "s": s, "k": k });
    let witness = json!({ "divisible": false, "partitions_checked": 0 });
    let total = u64::try_from(needed).unwrap_or(u64::MAX);
    Certificate::new("s-k-divisible", instance, witness, false, Coverage { checked: 0, total }, Instant::now())
}

fn replay_s_k_divisible(c: &Certificate) -> Result<bool> {
    let x = points_of(c)?;
    let s: usize = parse(&c.instance, "s")?;
    let k: usize = parse(&c.instance, "k")?;
    let divisible: bool = parse(&c.witness, "divisible")?;
    if divisible != c.verified {
        return Ok(false);
    }
    if !c.coverage.is_complete() {
        return Ok(!divisible);
    }
    if divisible {
        use itertools::Itertools;
        let blocks: Vec<BTreeSet<usize>> = parse(&c.witness, "blocks")?;
        let labels: Vec<usize> = blocks.iter().flatten().copied().sorted().collect();
        if blocks.len() != s || labels != (1..=x.len()).collect::<Vec<_>>() {
            return Ok(false);
        }
        return Ok((1..=x.len()).combinations(k).all(|r| common_point(&x, &blocks, &r.into_iter().collect()).is_some()));
    }
    Ok(matches!(is_s_k_divisible(&x, s, k, u128::MAX)?, SDivisibility::NotDivisible { .. }))
}

pub fn gale(x: &PointConfig) -> Result<Certificate> {
    let started = Instant::now();
    let g = gale_transform(x)?;
    let mut witness = json!({ "vectors": g.to_json() });
    if x.len() == x.dim() + 2 {
        witness["radon"] = partition_json(&radon_partition(x)?);
    }
    let verified = is_gale_diagram_of(x, &g);
    Ok(Certificate::new("gale", json!({ "points": x.to_json() }), witness, verified, Coverage::complete(1), started))
}

fn replay_gale(c: &Certificate) -> Result<bool> {
    let x = points_of(c)?;
    let g = GaleDiagram::from_json(field(&c.witness, "vectors")?).map_err(|e| schema_err(e.to_string()))?;
    let mut ok = is_gale_diagram_of(&x, &g) == c.verified;
    if let Some(r) = c.witness.get("radon") {
        let Ok(p) = partition_from_json(r, x.len()) else { return Ok(false) };
        let one_dim = g.dim() == 1;
        let signs_match = one_dim && {
            use num_traits::Signed;
            let pos = |l: usize| g.vectors()[l - 1][0].is_positive();
            p.a().iter().all(|&l| pos(l) == pos(1)) && p.b().iter().all(|&l| pos(l) != pos(1))
        };
        ok &= signs_match && refute_partition(&x, &p, 0).is_none();
    }
    Ok(ok)
}

pub fn gale_inverse_cert(g: &GaleDiagram) -> Result<Certificate> {
    let started = Instant::now();
    let x = gale_inverse(g)?;
    let verified = is_gale_diagram_of(&x, g);
    let witness = json!({ "points": x.to_json() });
    Ok(Certificate::new("gale-inverse", json!({ "vectors": g.to_json() }), witness, verified, Coverage::complete(1), started))
}

fn replay_gale_inverse(c: &Certificate) -> Result<bool> {
    let g = GaleDiagram::from_json(field(&c.instance, "vectors")?).map_err(|e| schema_err(e.to_string()))?;
    let x = PointConfig::from_json(field(&c.witness, "points")?).map_err(|e| schema_err(e.to_string()))?;
    Ok(is_gale_diagram_of(&x, &g) == c.verified)
}

pub fn neighbourly(x: &PointConfig, k: usize) -> Result<Certificate> {
    let started = Instant::now();
    let r = neighbourly_report(x, k)?;
    let total = {
        use itertools::Itertools;
        (1..=x.len()).combinations(x.dim() + 2).count() as u64
    };
    let witness = json!({ "circuits_checked": r.circuits_checked, "violation": r.violation });
    let instance = json!({ "points": x.to_json(), "k": k });
    // A violation settles the claim, so an early stop still covers the instance.
    let cert = Certificate::new("neighbourly", instance, witness, r.holds, Coverage::complete(total), started);
    Ok(cert)
}

fn replay_neighbourly(c: &Certificate) -> Result<bool> {
    let x = points_of(c)?;
    let k: usize = parse(&c.instance, "k")?;
    let violation: Option<AffineCircuit> = parse(&c.witness, "violation")?;
    let checked: u64 = parse(&c.witness, "circuits_checked")?;
    if !neighbourly_report(&x, k).is_ok_and(|r| r.circuits_checked == checked) {
        return Ok(false);
    }
    match violation {
        None => Ok(c.verified && neighbourly_report(&x, k).is_ok_and(|r| r.holds)),
        Some(v) => {
            let Ok(actual) = affine_circuit(&x, &v.support) else { return Ok(false) };
            let neg: Vec<Sign> = actual.signs.iter().map(|&s| -s).collect();
            let same = actual.signs == v.signs || neg == v.signs;
            Ok(!c.verified && same && (actual.positive() <= k || actual.negative() <= k))
        }
    }
}

/// The sign-flip search on the Gale diagram of `x`, composed into a
/// projective map whose image is checked for `k`-neighbourliness.
pub fn signflip(x: &PointConfig, k: usize) -> Result<Certificate> {
    let started = Instant::now();
    let g = gale_transform(x)?;
    let instance = json!({ "points": x.to_json(), "k": k });
    let total = 1u64 << (x.len() - 1);
    Ok(match find_sign_flip(&g, k) {
        Some(e) => {
            let p = projective_from_signs(x, &e)?;
            let image = apply_projective(&p, x)?;
            let neighbourly = crate::geometry::neighbourly::is_k_neighbourly(&image, k)?;
            let witness = json!({
                "found": true,
                "diagram": g.to_json(),
                "signs": signs_json(&e),
                "map": p.to_json(),
                "image": image.to_json(),
                "image_neighbourly": neighbourly,
            });
            Certificate::new("sign-flip", instance, witness, neighbourly, Coverage::complete(total), started)
        }
        None => {
            let failures: Vec<Vec<usize>> = (0..total)
                .into_par_iter()
                .map(|mask| {
                    let e = signs_of_mask(x.len(), mask);
                    crate::geometry::hull::first_hull_complement_failure(&g.flipped(&e), k, HullMembership::Closed)
                        .expect("no sign vector works")
                })
                .collect();
            let witness = json!({ "found": false, "diagram": g.to_json(), "refutations": failures });
            Certificate::new("sign-flip", instance, witness, false, Coverage::complete(total), started)
        }
    })
}

fn replay_signflip(c: &Certificate) -> Result<bool> {
    let x = points_of(c)?;
    let k: usize = parse(&c.instance, "k")?;
    let Ok(g) = gale_transform(&x) else { return Ok(false) };
    let stated = GaleDiagram::from_json(field(&c.witness, "diagram")?).map_err(|e| schema_err(e.to_string()))?;
    if stated != g {
        return Ok(false);
    }
    let found: bool = parse(&c.witness, "found")?;
    if found {
        let e = signs_from_json(field(&c.witness, "signs")?)?;
        let p = ProjectiveMap::from_json(field(&c.witness, "map")?).map_err(|e| schema_err(e.to_string()))?;
        let image = PointConfig::from_json(field(&c.witness, "image")?).map_err(|e| schema_err(e.to_string()))?;
        let stated_nb: bool = parse(&c.witness, "image_neighbourly")?;
        let ok = satisfies_flip(&g, &e, k)
            && p.is_regular()
            && realizes_signs(&p, &x, &e)
            && apply_projective(&p, &x).is_ok_and(|y| y == image)
            && crate::geometry::neighbourly::is_k_neighbourly(&image, k).is_ok_and(|nb| nb == stated_nb);
        return Ok(ok && c.verified == stated_nb);
    }
    let failures: Vec<Vec<usize>> = parse(&c.witness, "refutations")?;
    if failures.len() as u64 != 1u64 << (x.len() - 1) || c.verified {
        return Ok(false);
    }
    let ok = failures.par_iter().enumerate().all(|(mask, f)| {
        let flipped = g.flipped(&signs_of_mask(x.len(), mask as u64));
        let rest: Vec<&[crate::exact::Q]> =
            (1..=x.len()).filter(|i| !f.contains(i)).map(|i| flipped.vectors()[i - 1].as_slice()).collect();
        f.len() == k && f.iter().all(|&i| (1..=x.len()).contains(&i)) && !zero_in_hull(&rest, HullMembership::Closed)
    });
    Ok(ok)
}

pub fn projective(x: &PointConfig, e: &[Sign]) -> Result<Certificate> {
    let started = Instant::now();
    let instance = json!({ "points": x.to_json(), "signs": signs_json(e) });
    Ok(match projective_from_signs(x, e) {
        Ok(p) => {
            let image = apply_projective(&p, x)?;
            let witness = json!({ "realizable": true, "map": p.to_json(), "image": image.to_json() });
            Certificate::new("projective", instance, witness, true, Coverage::complete(1), started)
        }
        Err(Error::NotRealizable) => {
            let witness = json!({ "realizable": false });
            Certificate::new("projective", instance, witness, false, Coverage::complete(1), started)
        }
        Err(e) => return Err(e),
    })
}

fn replay_projective(c: &Certificate) -> Result<bool> {
    let x = points_of(c)?;
    let e = signs_from_json(field(&c.instance, "signs")?)?;
    let realizable: bool = parse(&c.witness, "realizable")?;
    if realizable != c.verified {
        return Ok(false);
    }
    if !realizable {
        return Ok(matches!(projective_from_signs(&x, &e), Err(Error::NotRealizable)));
    }
    let p = ProjectiveMap::from_json(field(&c.witness, "map")?).map_err(|e| schema_err(e.to_string()))?;
    let image = PointConfig::from_json(field(&c.witness, "image")?).map_err(|e| schema_err(e.to_string()))?;
    Ok(p.is_regular() && realizes_signs(&p, &x, &e) && apply_projective(&p, &x).is_ok_and(|y| y == image))
}

pub fn bounds(facts: &[BoundFact], d_max: usize, ks: &[usize]) -> Result<Certificate> {
    let started = Instant::now();
    let derived = index_relations(facts, 1..=d_max, ks)?;
    let instance = json!({ "facts": facts, "d_max": d_max, "ks": ks });
    Ok(Certificate::new("bounds", instance, json!({ "derived": derived }), true, Coverage::complete(1), started))
}

fn replay_bounds(c: &Certificate) -> Result<bool> {
    let facts: Vec<BoundFact> = parse(&c.instance, "facts")?;
    let d_max: usize = parse(&c.instance, "d_max")?;
    let ks: Vec<usize> = parse(&c.instance, "ks")?;
    let stated: Vec<DerivedBound> = parse(&c.witness, "derived")?;
    Ok(c.verified && index_relations(&facts, 1..=d_max, &ks).is_ok_and(|d| d == stated))
}

/// Re-checks a certificate. `Ok(false)` means the witness does not support
/// the stated verdict; malformed certificates are errors.
pub fn replay(c: &Certificate) -> Result<bool> {
    if c.schema != SCHEMA {
        return Err(schema_err(format!("unsupported schema {:?}", c.schema)));
    }
    if c.coverage.checked > c.coverage.total {
        return Ok(false);
    }
    match c.claim.as_str() {
        "prop-llom" | "prop-pt" => replay_digest(c),
        "lemma-lbase" | "lemma-general" => replay_lemma(c),
        "family-board" => replay_family_board(c),
        "travel" => replay_travel(c),
        "k-divisible" => replay_k_divisible(c),
        "s-k-divisible" => replay_s_k_divisible(c),
        "gale" => replay_gale(c),
        "gale-inverse" => replay_gale_inverse(c),
        "neighbourly" => replay_neighbourly(c),
        "sign-flip" => replay_signflip(c),
        "projective" => replay_projective(c),
        "bounds" => replay_bounds(c),
        other => Err(schema_err(format!("unknown claim {other:?}"))),
    }
}

/// Parses a points file: a JSON array of rational vectors.
pub fn parse_points(text: &str) -> Result<PointConfig> {
    let v: Value = serde_json::from_str(text)?;
    PointConfig::new(vectors_from_json(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::config::moment_curve_ints;
    use crate::geometry::sample::random_general_position;

    fn roundtrip(c: &Certificate) -> Certificate {
        parse_stream(&c.to_json_line()).unwrap().remove(0)
    }

    #[test]
    fn llom_certificate_replays() {
        let c = prop_llom(2, 3, Mode::Exhaustive, &Budget::unlimited()).unwrap();
        assert!(c.verified);
        assert_eq!(c.coverage, Coverage::complete(64));
        assert!(replay(&roundtrip(&c)).unwrap());
        let mut t = c.clone();
        t.witness["cyclic"] = json!(c.witness["cyclic"].as_u64().unwrap() + 1);
        assert!(!replay(&t).unwrap());
    }

    #[test]
    fn pt_certificate_replays() {
        let c = prop_pt(2, 3, Mode::Exhaustive, &Budget::unlimited()).unwrap();
        assert!(c.verified);
        assert!(replay(&c).unwrap());
    }

    #[test]
    fn sampled_digest_is_seeded() {
        let mode = Mode::Sampled { count: 50, seed: 3 };
        let a = prop_llom(3, 4, mode, &Budget::unlimited()).unwrap();
        let b = prop_llom(3, 4, mode, &Budget::unlimited()).unwrap();
        assert_eq!(a.comparable(), b.comparable());
        assert_eq!(a.seed, Some(3));
        assert!(replay(&a).unwrap());
    }

    #[test]
    fn partial_digest_is_not_verified() {
        let c = prop_llom(3, 4, Mode::Exhaustive, &Budget::unlimited().with_max_cases(10)).unwrap();
        assert!(!c.verified);
        assert!(replay(&c).unwrap());
    }

    #[test]
    fn lemma_certificate_replays_and_detects_tampering() {
        let p = FamilyParams::new(3, 2, None).unwrap();
        let c = lemma_family(p, Mode::Exhaustive, &Budget::unlimited()).unwrap();
        assert!(c.verified);
        assert!(replay(&roundtrip(&c)).unwrap());
        let mut t = c.clone();
        let set = &mut t.witness["entries"][0][1];
        let first = set[0].as_u64().unwrap();
        set[0] = json!(if first == 1 { 2 } else { 1 });
        assert!(!replay(&t).unwrap());
        let mut t = c.clone();
        t.instance["board"][0] = json!("#...");
        assert!(!replay(&t).unwrap());
    }

    #[test]
    fn divisibility_certificates() {
        let x = PointConfig::from_ints(&[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        let c = k_divisible(&x, 1).unwrap();
        assert!(!c.verified);
        assert!(replay(&c).unwrap());
        let mut t = c.clone();
        t.witness["refutations"][2]["hyperplane"]["offset"] = json!("100/1");
        assert!(!replay(&t).unwrap());

        let y = random_general_position(7, 2, 8, 20).unwrap();
        let c = k_divisible(&y, 1).unwrap();
        assert!(c.verified);
        assert!(replay(&c).unwrap());
        let mut t = c.clone();
        t.witness["divisible"] = json!(false);
        assert!(!replay(&t).unwrap());
    }

    #[test]
    fn geometry_certificates_replay() {
        let x = moment_curve_ints(2, 0..6).unwrap();
        for c in [gale(&x).unwrap(), neighbourly(&x, 1).unwrap(), neighbourly(&x, 2).unwrap(), signflip(&x, 1).unwrap()] {
            assert!(replay(&roundtrip(&c)).unwrap(), "{}", c.claim);
        }
        let line = PointConfig::from_ints(&[vec![0], vec![1], vec![2]]).unwrap();
        use Sign::{Minus as M, Plus as P};
        for e in [[M, P, P], [P, M, P]] {
            let c = projective(&line, &e).unwrap();
            assert!(replay(&c).unwrap());
        }
        let four = PointConfig::from_ints(&[vec![0, 0], vec![3, 0], vec![0, 3], vec![2, 2]]).unwrap();
        let c = gale(&four).unwrap();
        assert!(c.witness.get("radon").is_some());
        assert!(replay(&c).unwrap());
        let g = gale_transform(&x).unwrap();
        assert!(replay(&gale_inverse_cert(&g).unwrap()).unwrap());
    }

    #[test]
    fn unknown_claims_and_schemas_are_errors() {
        let mut c = gale(&moment_curve_ints(2, 0..5).unwrap()).unwrap();
        c.claim = "nope".into();
        assert!(replay(&c).is_err());
        c.claim = "gale".into();
        c.schema = "v0".into();
        assert!(replay(&c).is_err());
        assert!(parse_stream("{\"claim\": 1}").is_err());
    }

    #[test]
    fn stream_parsing() {
        let c = gale(&moment_curve_ints(2, 0..5).unwrap()).unwrap();
        let text = format!("{}\n{}\n", c.to_json_line(), c.to_json_line());
        assert_eq!(parse_stream(&text).unwrap().len(), 2);
        let arr = format!("[{},{}]", c.to_json_line(), c.to_json_line());
        assert_eq!(parse_stream(&arr).unwrap().len(), 2);
    }
}
