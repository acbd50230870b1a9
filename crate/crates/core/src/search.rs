//! Search for pairs of integer polynomials whose Legendre character sums
//! differ by the same constant at every prime of an evidence list.
//!
//! Hits are evidence only: a constant difference on finitely many primes is
//! a candidate, not a theorem. Two modes run side by side. The plain mode
//! looks for `S_f(p) - S_g(p) = c`; the twisted mode allows the factor
//! `(-1/p)` on the first sum, `(-1/p) S_f(p) - S_g(p) = c`.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::arith;
use crate::char_sums::{LegendreTable, SumRange};
use crate::error::{Error, Result};
use crate::poly::PolynomialZ;

/// Fewest evidence primes accepted by [`search_constant_pairs`].
pub const MIN_EVIDENCE_PRIMES: usize = 8;

/// Character sums (`x = 1..p-1`) of one polynomial across a list of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub poly: PolynomialZ,
    pub primes: Vec<u64>,
    pub sums: Vec<i64>,
}

/// Legendre tables for a fixed list of odd primes.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    tables: Vec<LegendreTable>,
}

impl PrimeContext {
    pub fn new(primes: &[u64]) -> Result<Self> {
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "primes must be strictly ascending".into(),
            ));
        }
        let tables = primes
            .iter()
            .map(|&p| LegendreTable::new(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { tables })
    }

    pub fn primes(&self) -> Vec<u64> {
        self.tables.iter().map(LegendreTable::prime).collect()
    }

    pub fn sums(&self, f: &PolynomialZ) -> Vec<i64> {
        self.tables
            .iter()
            .map(|t| t.char_sum(f, SumRange::FromOne))
            .collect()
    }

    pub fn signature(&self, f: &PolynomialZ) -> Signature {
        Signature {
            poly: f.clone(),
            primes: self.primes(),
            sums: self.sums(f),
        }
    }

    /// `(-1/p)` per prime.
    fn minus_one_symbols(&self) -> Vec<i64> {
        self.tables
            .iter()
            .map(|t| i64::from(t.symbol(t.prime() - 1)))
            .collect()
    }

    pub fn fundamentally_different(&self, f: &PolynomialZ, g: &PolynomialZ) -> bool {
        self.tables.iter().any(|t| {
            let p = t.prime();
            let (fc, gc) = (f.reduced(p), g.reduced(p));
            (1..p).any(|x| {
                let a = t.symbol(crate::poly::eval_reduced(&fc, x, p));
                let b = t.symbol(crate::poly::eval_reduced(&gc, x, p));
                a != 0 && b != 0 && a != b
            })
        })
    }
}

pub fn signature(f: &PolynomialZ, primes: &[u64]) -> Result<Signature> {
    Ok(PrimeContext::new(primes)?.signature(f))
}

/// The sums with the first entry subtracted from each.
pub fn normalized_key(sig: &Signature) -> Vec<i64> {
    normalize(&sig.sums)
}

fn normalize(sums: &[i64]) -> Vec<i64> {
    match sums.first() {
        Some(&first) => sums.iter().map(|s| s - first).collect(),
        None => Vec::new(),
    }
}

/// True iff at some listed prime `p` and some `x` in `1..p-1` the symbols
/// `(f(x)/p)` and `(g(x)/p)` are both nonzero and differ.
pub fn fundamentally_different(f: &PolynomialZ, g: &PolynomialZ, primes: &[u64]) -> Result<bool> {
    Ok(PrimeContext::new(primes)?.fundamentally_different(f, g))
}

/// Polynomials of degree `1..=max_degree` with coefficients in
/// `[-coeff_bound, coeff_bound]` and positive leading coefficient, one per
/// equivalence class.
///
/// Classes are generated by `x -> x + t` (`|t| <= coeff_bound`, degree ≥ 2
/// only), `x -> -x` and `f -> s^2 f` (`s ≥ 2`), wherever both ends of a move
/// stay within bounds. Each class is represented by its member with the
/// smallest coefficient mass, ties broken by [`PolynomialZ`] order; the
/// output is sorted by that order.
pub fn enumerate_polys(max_degree: usize, coeff_bound: i64) -> Vec<PolynomialZ> {
    assert!(max_degree >= 1 && coeff_bound >= 1);
    let all = all_polys(max_degree, coeff_bound);
    let index: HashMap<&PolynomialZ, usize> = all.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut classes = UnionFind::new(all.len());
    for (i, f) in all.iter().enumerate() {
        let mut images = vec![f.reflect()];
        if f.degree() >= Some(2) {
            images.extend(
                (-coeff_bound..=coeff_bound)
                    .filter(|&t| t != 0)
                    .map(|t| f.shift(t)),
            );
        }
        let mut s = 2i64;
        while s * s * f.max_abs_coeff() <= coeff_bound {
            images.push(f.scale(s * s));
            s += 1;
        }
        for g in &images {
            if let Some(&j) = index.get(g) {
                classes.union(i, j);
            }
        }
    }
    let mut best: HashMap<usize, usize> = HashMap::new();
    for i in 0..all.len() {
        let root = classes.find(i);
        let entry = best.entry(root).or_insert(i);
        if simplicity(&all[i]) < simplicity(&all[*entry]) {
            *entry = i;
        }
    }
    let mut reps: Vec<PolynomialZ> = best.into_values().map(|i| all[i].clone()).collect();
    reps.sort();
    reps
}

fn simplicity(f: &PolynomialZ) -> (i64, &PolynomialZ) {
    (f.coeffs().iter().map(|c| c.abs()).sum(), f)
}

fn all_polys(max_degree: usize, bound: i64) -> Vec<PolynomialZ> {
    let mut out = Vec::new();
    for deg in 1..=max_degree {
        let width = (2 * bound + 1) as u64;
        let lower_count = width.pow(deg as u32);
        for lead in 1..=bound {
            for code in 0..lower_count {
                let mut coeffs = Vec::with_capacity(deg + 1);
                let mut c = code;
                for _ in 0..deg {
                    coeffs.push((c % width) as i64 - bound);
                    c /= width;
                }
                coeffs.push(lead);
                out.push(PolynomialZ::new(coeffs));
            }
        }
    }
    out.sort();
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub f: PolynomialZ,
    pub g: PolynomialZ,
    pub c: i64,
    pub primes: Vec<u64>,
    /// `(-1/p)` multiplies the sums of `f`.
    pub twisted: bool,
    pub structural_notes: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub hits: Vec<SearchHit>,
    /// Observed `c` values among plain hits.
    pub histogram: BTreeMap<i64, usize>,
    /// Observed `c` values among twisted hits.
    pub twisted_histogram: BTreeMap<i64, usize>,
    pub polys_enumerated: usize,
    pub primes: Vec<u64>,
}

/// Sum of `(f(x)/p)` over `x = 1..p-1` recomputed from scratch, through the
/// Euler-criterion symbol rather than the precomputed tables.
fn direct_sum(f: &PolynomialZ, p: u64) -> i64 {
    (1..p)
        .map(|x| i64::from(arith::legendre(f.eval_mod(x as i64, p) as i64, p).expect("odd prime")))
        .sum()
}

fn twist_sign(p: u64) -> i64 {
    i64::from(arith::legendre(-1, p).expect("odd prime"))
}

/// Re-checks a hit prime by prime, independent of the grouping that found it.
pub fn verify_hit(hit: &SearchHit) -> bool {
    hit.primes.iter().all(|&p| {
        let sf = direct_sum(&hit.f, p);
        let sf = if hit.twisted { twist_sign(p) * sf } else { sf };
        sf - direct_sum(&hit.g, p) == hit.c
    })
}

fn notes(f: &PolynomialZ, g: &PolynomialZ, primes: &[u64]) -> String {
    let pmax = *primes.last().expect("non-empty evidence");
    let sf = |h: &PolynomialZ| {
        if h.is_squarefree_mod(pmax) {
            "yes"
        } else {
            "no"
        }
    };
    format!(
        "conjectural; degrees {}/{}; squarefree mod {pmax}: {}/{}",
        f.degree().unwrap_or(0),
        g.degree().unwrap_or(0),
        sf(f),
        sf(g)
    )
}

fn make_hit(f: &PolynomialZ, g: &PolynomialZ, c: i64, primes: &[u64], twisted: bool) -> SearchHit {
    SearchHit {
        f: f.clone(),
        g: g.clone(),
        c,
        primes: primes.to_vec(),
        twisted,
        structural_notes: notes(f, g, primes),
    }
}

/// Plain-mode check of one pair.
pub fn check_pair(f: &PolynomialZ, g: &PolynomialZ, primes: &[u64]) -> Result<Option<SearchHit>> {
    pair_check(f, g, primes, false)
}

/// Twisted-mode check: is `(-1/p) S_f(p) - S_g(p)` constant over `primes`?
pub fn check_twisted_pair(
    f: &PolynomialZ,
    g: &PolynomialZ,
    primes: &[u64],
) -> Result<Option<SearchHit>> {
    pair_check(f, g, primes, true)
}

fn pair_check(
    f: &PolynomialZ,
    g: &PolynomialZ,
    primes: &[u64],
    twisted: bool,
) -> Result<Option<SearchHit>> {
    let ctx = PrimeContext::new(primes)?;
    let mut sf = ctx.sums(f);
    if twisted {
        for (s, t) in sf.iter_mut().zip(ctx.minus_one_symbols()) {
            *s *= t;
        }
    }
    let sg = ctx.sums(g);
    let diffs: Vec<i64> = sf.iter().zip(&sg).map(|(a, b)| a - b).collect();
    let constant = diffs.windows(2).all(|w| w[0] == w[1]);
    if diffs.is_empty() || !constant || !ctx.fundamentally_different(f, g) {
        return Ok(None);
    }
    Ok(Some(make_hit(f, g, diffs[0], primes, twisted)))
}

/// Enumerates polynomials, groups them by normalized signature and emits
/// every fundamentally different pair with a constant difference.
///
/// Twisted hits are reported only for pairs whose plain difference is not
/// already constant. Every hit is re-verified with [`verify_hit`].
pub fn search_constant_pairs(
    max_degree: usize,
    coeff_bound: i64,
    primes: &[u64],
) -> Result<SearchReport> {
    if primes.len() < MIN_EVIDENCE_PRIMES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_EVIDENCE_PRIMES} evidence primes (got {})",
            primes.len()
        )));
    }
    if max_degree == 0 || coeff_bound < 1 {
        return Err(Error::InvalidArgument(
            "max_degree and coeff_bound must be ≥ 1".into(),
        ));
    }
    let ctx = PrimeContext::new(primes)?;
    let polys = enumerate_polys(max_degree, coeff_bound);
    let sums: Vec<Vec<i64>> = polys.par_iter().map(|f| ctx.sums(f)).collect();
    let signs = ctx.minus_one_symbols();

    let mut groups: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, s) in sums.iter().enumerate() {
        groups.entry(normalize(s)).or_default().push(i);
    }

    let mut candidates: Vec<(usize, usize, bool)> = Vec::new();
    let mut plain_pairs: HashSet<(usize, usize)> = HashSet::new();
    for members in groups.values() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                candidates.push((i.min(j), i.max(j), false));
                plain_pairs.insert((i.min(j), i.max(j)));
            }
        }
    }
    for (i, s) in sums.iter().enumerate() {
        let twisted: Vec<i64> = s.iter().zip(&signs).map(|(a, b)| a * b).collect();
        if let Some(members) = groups.get(&normalize(&twisted)) {
            for &j in members {
                if j != i && !plain_pairs.contains(&(i.min(j), i.max(j))) {
                    candidates.push((i, j, true));
                }
            }
        }
    }

    let mut hits: Vec<SearchHit> = candidates
        .par_iter()
        .filter(|&&(i, j, _)| ctx.fundamentally_different(&polys[i], &polys[j]))
        .map(|&(i, j, twisted)| {
            let first_f = if twisted {
                signs[0] * sums[i][0]
            } else {
                sums[i][0]
            };
            make_hit(&polys[i], &polys[j], first_f - sums[j][0], primes, twisted)
        })
        .collect();
    assert!(
        hits.iter().all(verify_hit),
        "grouping produced an unverifiable hit"
    );
    hits.sort_by(|a, b| (a.twisted, a.c, &a.f, &a.g).cmp(&(b.twisted, b.c, &b.f, &b.g)));

    let mut histogram = BTreeMap::new();
    let mut twisted_histogram = BTreeMap::new();
    for h in &hits {
        let hist = if h.twisted {
            &mut twisted_histogram
        } else {
            &mut histogram
        };
        *hist.entry(h.c).or_insert(0) += 1;
    }
    Ok(SearchReport {
        hits,
        histogram,
        twisted_histogram,
        polys_enumerated: polys.len(),
        primes: primes.to_vec(),
    })
}
