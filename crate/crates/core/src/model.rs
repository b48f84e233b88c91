//! Alphabets, composite symbols, ω-sequences and observed distributions.
//!
//! Symbols of the base alphabet are labelled `1..=q` wherever a caller names
//! a symbol (supports, base symbols, read contents); probability and count
//! vectors are plain 0-based arrays of length `q`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};

/// Tolerance on `Σ probs = 1` accepted at construction.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// The base alphabet `{1, …, q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseAlphabet(usize);

impl BaseAlphabet {
    pub fn new(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidAlphabet("q must be at least 1".into()));
        }
        Ok(BaseAlphabet(q))
    }

    pub fn q(self) -> usize {
        self.0
    }
}

/// A probability distribution over the base alphabet.
#[derive(Debug, Clone)]
pub struct CompositeSymbol {
    probs: Vec<f64>,
}

impl CompositeSymbol {
    /// Validates and, for deviations up to [`SUM_TOLERANCE`], renormalizes.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidAlphabet("empty probability vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "entry {p} is negative or not finite"
            )));
        }
        let sum: f64 = probs.iter().sum();
        let dev = (sum - 1.0).abs();
        if dev > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        let mut probs = probs;
        // plain rounding noise from the caller's arithmetic is left alone
        if dev > probs.len() as f64 * f64::EPSILON {
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        if probs.iter().all(|&p| p == 0.0) {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        Ok(CompositeSymbol { probs })
    }

    /// Binary shorthand: `x` stands for `(x, 1 - x)`.
    pub fn binary(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidDistribution(format!(
                "binary value {x} outside [0, 1]"
            )));
        }
        CompositeSymbol::new(vec![x, 1.0 - x])
    }

    pub fn q(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Symbols (1-based) carrying positive probability.
    pub fn support(&self) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Mirror image `(ρ_q, …, ρ_1)`; for binary symbols this is `x ↦ 1 - x`.
    pub fn reflected(&self) -> CompositeSymbol {
        let mut probs = self.probs.clone();
        probs.reverse();
        CompositeSymbol { probs }
    }

    /// Lexicographic order on the probability vectors.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.probs.iter().zip(&other.probs) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.probs.len().cmp(&other.probs.len())
    }

    /// Counts `ρ·n` when every entry sits on the `1/n` grid.
    pub fn grid_counts(&self, n: u32) -> Option<Vec<u32>> {
        let mut counts = Vec::with_capacity(self.q());
        for &p in &self.probs {
            let scaled = p * f64::from(n);
            let rounded = scaled.round();
            if (scaled - rounded).abs() > 1e-9 {
                return None;
            }
            counts.push(rounded as u32);
        }
        (counts.iter().sum::<u32>() == n).then_some(counts)
    }
}

impl PartialEq for CompositeSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.lex_cmp(other) == Ordering::Equal
    }
}

impl Eq for CompositeSymbol {}

impl PartialOrd for CompositeSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CompositeSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl fmt::Display for CompositeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `(1/q, …, 1/q)`.
pub fn uniform_symbol(q: usize) -> Result<CompositeSymbol> {
    let q = BaseAlphabet::new(q)?.q();
    CompositeSymbol::new(vec![1.0 / q as f64; q])
}

/// The indicator distribution `e_{q,i}` on symbol `i` (1-based).
pub fn base_symbol(q: usize, i: usize) -> Result<CompositeSymbol> {
    let q = BaseAlphabet::new(q)?.q();
    if i == 0 || i > q {
        return Err(Error::IndexOutOfRange { index: i, q });
    }
    let mut probs = vec![0.0; q];
    probs[i - 1] = 1.0;
    CompositeSymbol::new(probs)
}

/// A composite symbol uniform on exactly ω base symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaSymbol {
    q: usize,
    support: Vec<usize>,
}

impl OmegaSymbol {
    pub fn new(q: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        let q = BaseAlphabet::new(q)?.q();
        let mut support: Vec<usize> = support.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        if support.is_empty() {
            return Err(Error::InvalidParameter("ω-symbol support is empty".into()));
        }
        if let Some(&bad) = support.iter().find(|&&s| s == 0 || s > q) {
            return Err(Error::IndexOutOfRange { index: bad, q });
        }
        if support.len() > 64 {
            return Err(Error::InvalidParameter("ω above 64 is not supported".into()));
        }
        Ok(OmegaSymbol { q, support })
    }

    /// The symbol on `{1, …, ω}`.
    pub fn leading(q: usize, omega: usize) -> Result<Self> {
        if omega == 0 || omega > q {
            return Err(Error::InvalidParameter(format!(
                "ω={omega} must lie in 1..={q}"
            )));
        }
        OmegaSymbol::new(q, 1..=omega)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn omega(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn to_composite(&self) -> CompositeSymbol {
        let mut probs = vec![0.0; self.q];
        let w = 1.0 / self.omega() as f64;
        for &s in &self.support {
            probs[s - 1] = w;
        }
        CompositeSymbol::new(probs).expect("uniform on a nonempty support")
    }

    /// One received symbol: uniform over the support.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.support[rng.random_range(0..self.support.len())]
    }
}

/// A length-ℓ sequence of ω-symbols sharing one ω and one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSequence {
    q: usize,
    omega: usize,
    entries: Vec<OmegaSymbol>,
}

impl OmegaSequence {
    pub fn new(entries: Vec<OmegaSymbol>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::InvalidParameter("sequence length ℓ must be at least 1".into()))?;
        let (q, omega) = (first.q(), first.omega());
        for e in &entries {
            if e.q() != q {
                return Err(Error::AlphabetMismatch { expected: q, found: e.q() });
            }
            if e.omega() != omega {
                return Err(Error::InvalidParameter(format!(
                    "mixed ω in one sequence ({omega} and {})",
                    e.omega()
                )));
            }
        }
        Ok(OmegaSequence { q, omega, entries })
    }

    /// ℓ copies of the symbol on `{1, …, ω}`; every sequence with the same
    /// (ℓ, ω) has the same recovery-time distribution.
    pub fn canonical(q: usize, omega: usize, ell: usize) -> Result<Self> {
        let sym = OmegaSymbol::leading(q, omega)?;
        OmegaSequence::new(vec![sym; ell])
    }

    /// A sequence with uniformly random ω-supports.
    pub fn random<R: Rng + ?Sized>(q: usize, omega: usize, ell: usize, rng: &mut R) -> Result<Self> {
        OmegaSymbol::leading(q, omega)?;
        let entries = (0..ell)
            .map(|_| {
                let picked = rand::seq::index::sample(rng, q, omega);
                OmegaSymbol::new(q, picked.into_iter().map(|i| i + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        OmegaSequence::new(entries)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[OmegaSymbol] {
        &self.entries
    }

    /// One read: an independent draw at every index.
    pub fn transmit<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.entries.iter().map(|e| e.sample(rng)).collect()
    }
}

/// Reads received so far, optionally labelled with the strand they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionLog {
    q: usize,
    ell: usize,
    reads: Vec<Vec<usize>>,
    labels: Option<Vec<usize>>,
}

impl TransmissionLog {
    pub fn new(q: usize, ell: usize) -> Self {
        TransmissionLog { q, ell, reads: Vec::new(), labels: None }
    }

    pub fn labelled(q: usize, ell: usize) -> Self {
        TransmissionLog { q, ell, reads: Vec::new(), labels: Some(Vec::new()) }
    }

    fn check_read(&self, read: &[usize]) -> Result<()> {
        if read.len() != self.ell {
            return Err(Error::InvalidParameter(format!(
                "read has {} entries, expected {}",
                read.len(),
                self.ell
            )));
        }
        if let Some(&bad) = read.iter().find(|&&s| s == 0 || s > self.q) {
            return Err(Error::IndexOutOfRange { index: bad, q: self.q });
        }
        Ok(())
    }

    pub fn push(&mut self, read: Vec<usize>) -> Result<()> {
        if self.labels.is_some() {
            return Err(Error::InvalidParameter("labelled log needs a label".into()));
        }
        self.check_read(&read)?;
        self.reads.push(read);
        Ok(())
    }

    pub fn push_labelled(&mut self, read: Vec<usize>, label: usize) -> Result<()> {
        self.check_read(&read)?;
        match &mut self.labels {
            Some(labels) => labels.push(label),
            None => return Err(Error::InvalidParameter("log is not labelled".into())),
        }
        self.reads.push(read);
        Ok(())
    }

    pub fn reads(&self) -> &[Vec<usize>] {
        &self.reads
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Per-index observed sets (as sorted symbol lists) over the reads that
    /// carry `label`, or over all reads when `label` is `None`.
    pub fn observed_sets(&self, label: Option<usize>) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.ell];
        for (k, read) in self.reads.iter().enumerate() {
            if let (Some(want), Some(labels)) = (label, &self.labels) {
                if labels[k] != want {
                    continue;
                }
            }
            for (set, &s) in sets.iter_mut().zip(read) {
                if let Err(pos) = set.binary_search(&s) {
                    set.insert(pos, s);
                }
            }
        }
        sets
    }

    /// Number of indices of `seq` whose observed set equals the support.
    pub fn recovered_indices(&self, seq: &OmegaSequence, label: Option<usize>) -> usize {
        self.observed_sets(label)
            .iter()
            .zip(seq.entries())
            .filter(|(obs, sym)| obs.as_slice() == sym.support())
            .count()
    }
}

/// Empirical counts of an n-transmission of one composite symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObservedDistribution {
    counts: Vec<u32>,
    n: u32,
}

impl ObservedDistribution {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidAlphabet("empty count vector".into()));
        }
        let n: u32 = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidParameter("sample count n must be at least 1".into()));
        }
        Ok(ObservedDistribution { counts, n })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> usize {
        self.counts.len()
    }

    /// `θ_i = counts_i / n`.
    pub fn theta(&self) -> Vec<f64> {
        let n = f64::from(self.n);
        self.counts.iter().map(|&c| f64::from(c) / n).collect()
    }

    pub fn to_symbol(&self) -> CompositeSymbol {
        CompositeSymbol::new(self.theta()).expect("counts sum to n")
    }

    /// The same distribution on the grid of `k·n` samples.
    pub fn scaled(&self, k: u32) -> ObservedDistribution {
        ObservedDistribution {
            counts: self.counts.iter().map(|c| c * k).collect(),
            n: self.n * k,
        }
    }

    /// `true` when all mass sits on a single symbol.
    pub fn is_base(&self) -> bool {
        self.counts.iter().filter(|&&c| c > 0).count() == 1
    }
}

impl fmt::Display for ObservedDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `|Ω_n^q| = C(n + q - 1, q - 1)`.
pub fn omega_size(n: u32, q: usize) -> BigUint {
    binomial(u64::from(n) + q as u64 - 1, q as u64 - 1)
}

/// Lazily walks the compositions of `n` into `q` parts in lexicographic
/// order of the count vectors.
#[derive(Debug, Clone)]
pub struct CompositionIter {
    next: Option<Vec<u32>>,
}

impl CompositionIter {
    pub fn new(n: u32, q: usize) -> Self {
        let mut first = vec![0; q];
        if let Some(last) = first.last_mut() {
            *last = n;
        }
        CompositionIter { next: (q > 0).then_some(first) }
    }
}

impl Iterator for CompositionIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let q = current.len();
        let mut succ = current.clone();
        // rightmost position that still has mass to its right
        let mut tail = 0u32;
        let mut pivot = None;
        for i in (0..q.saturating_sub(1)).rev() {
            tail += succ[i + 1];
            if tail > 0 {
                pivot = Some(i);
                break;
            }
        }
        if let Some(i) = pivot {
            succ[i] += 1;
            for c in &mut succ[i + 1..] {
                *c = 0;
            }
            succ[q - 1] = tail - 1;
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// All of `Ω_n^q` as observed distributions, lexicographic in the counts.
pub fn enumerate_omega(n: u32, q: usize) -> Result<Vec<ObservedDistribution>> {
    BaseAlphabet::new(q)?;
    if n == 0 {
        return Err(Error::InvalidParameter("sample count n must be at least 1".into()));
    }
    Ok(CompositionIter::new(n, q)
        .map(|counts| ObservedDistribution { counts, n })
        .collect())
}
