//! The pattern distribution: Poisson treewidth bound, k-tree draw, random
//! subgraph, and reproducible pattern banks.
//!
//! A bank is a pure function of its config — the seed is the only source of
//! randomness in the whole pipeline, so regenerating a bank yields the same
//! bytes and every downstream artifact is reproducible from the bank file.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{make_nice, restrict, sample_ktree, validate, TreeDecomposition};
use crate::graph::{Graph, GraphError};
use crate::hom::{hom_dp, HomError};

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error("n must be at least 1")]
    ZeroN,
    #[error("d must be at least 1")]
    ZeroD,
    #[error("vertex keep probability {0} outside (0, 1]")]
    BadVertexKeep(f64),
    #[error("edge keep probability {0} outside (0, 1]")]
    BadEdgeKeep(f64),
    #[error("bank JSON: {0}")]
    BadBankJson(String),
    #[error("bank pattern {ordinal}: {source}")]
    BadBankGraph {
        ordinal: usize,
        source: GraphError,
    },
}

/// How the Poisson draw maps to a treewidth bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaMode {
    /// k = Poisson(λ): the distribution from the expected-polytime argument.
    /// At realistic n most draws are 0, i.e. edgeless patterns.
    #[serde(rename = "paper-strict")]
    PaperStrict,
    /// k = 1 + Poisson(λ): same support guarantees and expected-cost bound,
    /// but small banks carry far more information. The default.
    #[serde(rename = "shifted")]
    Shifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SizeMode {
    #[serde(rename = "uniform-1-to-n")]
    Uniform1ToN,
}

/// Parameters of the pattern distribution.
///
/// `n` is the size bound of the graphs the bank is meant to embed; `d` is
/// the target runtime exponent: the Poisson rate λ = (1 + d·ln n)/n keeps the
/// expected counting cost at `O(v(G)^(d+1))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub d: usize,
    pub lambda_mode: LambdaMode,
    pub size_mode: SizeMode,
    pub vertex_keep_prob: f64,
    pub edge_keep_prob: f64,
    pub treewidth_cap: Option<usize>,
    pub seed: u64,
}

impl SamplerConfig {
    /// Defaults from the experiment setup: d = 2, shifted mode, keep every
    /// vertex, keep each edge with probability 1/2, no treewidth cap.
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            d: 2,
            lambda_mode: LambdaMode::Shifted,
            size_mode: SizeMode::Uniform1ToN,
            vertex_keep_prob: 1.0,
            edge_keep_prob: 0.5,
            treewidth_cap: None,
            seed,
        }
    }

    pub fn with_treewidth_cap(mut self, cap: usize) -> Self {
        self.treewidth_cap = Some(cap);
        self
    }

    pub fn with_lambda_mode(mut self, mode: LambdaMode) -> Self {
        self.lambda_mode = mode;
        self
    }

    /// Poisson rate λ = (1 + d·ln n) / n.
    pub fn lambda(&self) -> f64 {
        (1.0 + self.d as f64 * (self.n as f64).ln()) / self.n as f64
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.n == 0 {
            return Err(SamplerError::ZeroN);
        }
        if self.d == 0 {
            return Err(SamplerError::ZeroD);
        }
        if !(self.vertex_keep_prob > 0.0 && self.vertex_keep_prob <= 1.0) {
            return Err(SamplerError::BadVertexKeep(self.vertex_keep_prob));
        }
        if !(self.edge_keep_prob > 0.0 && self.edge_keep_prob <= 1.0) {
            return Err(SamplerError::BadEdgeKeep(self.edge_keep_prob));
        }
        Ok(())
    }

    /// The deterministic random stream every bank draw consumes.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// One sampled pattern: the graph, its width certificate, and draw metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternSample {
    pub pattern: Graph,
    pub decomposition: TreeDecomposition,
    pub drawn_k: usize,
    pub drawn_size: usize,
    pub ordinal: usize,
}

/// An ordered list of i.i.d. pattern draws, the unit of experiment
/// reproducibility. Duplicates are kept: the averaged-kernel analysis assumes
/// raw draws.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternBank {
    pub config: SamplerConfig,
    pub patterns: Vec<PatternSample>,
}

/// Poisson(λ) draw (plus 1 in shifted mode), clamped to n-1 and to the
/// treewidth cap when one is set.
pub fn draw_treewidth_bound<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> usize {
    let poisson = Poisson::new(cfg.lambda()).expect("lambda is positive and finite");
    let raw = poisson.sample(rng) as usize;
    let k = match cfg.lambda_mode {
        LambdaMode::PaperStrict => raw,
        LambdaMode::Shifted => raw + 1,
    };
    let mut bound = k.min(cfg.n.saturating_sub(1));
    if let Some(cap) = cfg.treewidth_cap {
        bound = bound.min(cap);
    }
    bound
}

/// Draws one pattern: treewidth bound, size uniform in 1..=n, k-tree,
/// then independent vertex and edge thinning. The decomposition is restricted
/// to the kept vertices and relabeled densely alongside the pattern. Empty
/// results are resampled, so the returned pattern always has at least one
/// vertex. `ordinal` is left at 0; banks assign it.
pub fn sample_pattern<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> PatternSample {
    loop {
        let drawn_k = draw_treewidth_bound(cfg, rng);
        let drawn_size = rng.random_range(1..=cfg.n);
        let (ktree, td) = sample_ktree(drawn_k, drawn_size, rng);

        let kept: BTreeSet<usize> = (0..drawn_size)
            .filter(|_| rng.random_bool(cfg.vertex_keep_prob))
            .collect();
        let mut edges = Vec::new();
        for (u, v) in ktree.edges() {
            if kept.contains(&u) && kept.contains(&v) && rng.random_bool(cfg.edge_keep_prob) {
                edges.push((u, v));
            }
        }
        if kept.is_empty() {
            continue;
        }

        let relabel: BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let pattern = Graph::new(
            kept.len(),
            edges.iter().map(|&(u, v)| (relabel[&u], relabel[&v])),
        )
        .expect("kept endpoints are relabeled in range");
        let decomposition = restrict(&td, &kept).relabeled(&relabel);
        debug_assert!(validate(&pattern, &decomposition).is_ok());

        return PatternSample {
            pattern,
            decomposition,
            drawn_k,
            drawn_size,
            ordinal: 0,
        };
    }
}

/// `count` i.i.d. patterns from the stream seeded by `cfg.seed`.
/// Bit-reproducible: the same config always yields the same bank.
pub fn sample_bank(cfg: &SamplerConfig, count: usize) -> PatternBank {
    assert!(count >= 1, "a bank needs at least one pattern");
    let mut rng = cfg.rng();
    let patterns = (0..count)
        .map(|ordinal| {
            let mut sample = sample_pattern(cfg, &mut rng);
            sample.ordinal = ordinal;
            sample
        })
        .collect();
    PatternBank {
        config: cfg.clone(),
        patterns,
    }
}

/// Outcome of growing a bank until some pattern separates a pair of graphs.
#[derive(Clone, Debug)]
pub struct DistinguishRun {
    /// Every pattern drawn, in order.
    pub bank: PatternBank,
    /// Index of the first pattern with differing counts, or `None` when the
    /// cap was exhausted with all counts equal.
    pub distinguishing: Option<usize>,
}

/// Draws patterns one at a time until `hom(F, g) != hom(F, h)` or `cap`
/// patterns have been tried. Exhausting the cap is an ordinary outcome, not
/// an error — it is what happens on isomorphic inputs.
pub fn sample_until_distinguished(
    cfg: &SamplerConfig,
    g: &Graph,
    h: &Graph,
    cap: usize,
) -> Result<DistinguishRun, HomError> {
    let mut rng = cfg.rng();
    let mut patterns = Vec::new();
    let mut distinguishing = None;
    for ordinal in 0..cap {
        let mut sample = sample_pattern(cfg, &mut rng);
        sample.ordinal = ordinal;
        let ntd = make_nice(&sample.decomposition)
            .expect("sampled decompositions are tree-shaped");
        let count_g = hom_dp(&sample.pattern, &ntd, g)?;
        let count_h = hom_dp(&sample.pattern, &ntd, h)?;
        let found = count_g != count_h;
        patterns.push(sample);
        if found {
            distinguishing = Some(ordinal);
            break;
        }
    }
    Ok(DistinguishRun {
        bank: PatternBank {
            config: cfg.clone(),
            patterns,
        },
        distinguishing,
    })
}

// --- Bank JSON (the on-disk interchange format) ---

#[derive(Serialize, Deserialize)]
struct BankFile {
    config: SamplerConfig,
    patterns: Vec<PatternFile>,
}

#[derive(Serialize, Deserialize)]
struct PatternFile {
    ordinal: usize,
    drawn_k: usize,
    drawn_size: usize,
    vertices: usize,
    edges: Vec<(usize, usize)>,
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

impl PatternBank {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// A bank over an explicit pattern list, each certified by the trivial
    /// single-bag decomposition. Not a sampler output: used for exhaustive
    /// and reference experiments where the pattern set is fixed up front.
    pub fn explicit(patterns: impl IntoIterator<Item = Graph>) -> PatternBank {
        let patterns: Vec<PatternSample> = patterns
            .into_iter()
            .enumerate()
            .map(|(ordinal, pattern)| {
                let n = pattern.vertex_count();
                PatternSample {
                    decomposition: TreeDecomposition::single_bag(n),
                    drawn_k: n.saturating_sub(1),
                    drawn_size: n,
                    ordinal,
                    pattern,
                }
            })
            .collect();
        let n = patterns
            .iter()
            .map(|p| p.pattern.vertex_count())
            .max()
            .unwrap_or(1)
            .max(1);
        PatternBank {
            config: SamplerConfig::new(n, 0),
            patterns,
        }
    }

    pub fn to_json(&self) -> String {
        let file = BankFile {
            config: self.config.clone(),
            patterns: self
                .patterns
                .iter()
                .map(|p| PatternFile {
                    ordinal: p.ordinal,
                    drawn_k: p.drawn_k,
                    drawn_size: p.drawn_size,
                    vertices: p.pattern.vertex_count(),
                    edges: p.pattern.edges().collect(),
                    bags: p
                        .decomposition
                        .bags()
                        .iter()
                        .map(|b| b.iter().copied().collect())
                        .collect(),
                    tree_edges: p.decomposition.tree_edges().collect(),
                })
                .collect(),
        };
        let mut json = serde_json::to_string(&file).expect("bank serializes");
        json.push('\n');
        json
    }

    pub fn from_json(text: &str) -> Result<PatternBank, SamplerError> {
        let file: BankFile =
            serde_json::from_str(text).map_err(|e| SamplerError::BadBankJson(e.to_string()))?;
        let patterns = file
            .patterns
            .into_iter()
            .map(|p| {
                let pattern = Graph::new(p.vertices, p.edges).map_err(|source| {
                    SamplerError::BadBankGraph {
                        ordinal: p.ordinal,
                        source,
                    }
                })?;
                Ok(PatternSample {
                    pattern,
                    decomposition: TreeDecomposition::new(
                        p.bags.into_iter().map(|b| b.into_iter().collect()).collect(),
                        p.tree_edges,
                    ),
                    drawn_k: p.drawn_k,
                    drawn_size: p.drawn_size,
                    ordinal: p.ordinal,
                })
            })
            .collect::<Result<Vec<_>, SamplerError>>()?;
        Ok(PatternBank {
            config: file.config,
            patterns,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::hom::hom_bruteforce;

    #[test]
    fn lambda_matches_closed_form() {
        let cfg = SamplerConfig::new(41, 0).with_lambda_mode(LambdaMode::PaperStrict);
        let expected = (1.0 + 2.0 * 41f64.ln()) / 41.0;
        assert!((cfg.lambda() - expected).abs() < 1e-15);
        assert!((cfg.lambda() - 0.2056).abs() < 1e-3);
    }

    #[test]
    fn shifted_mode_never_draws_zero() {
        let cfg = SamplerConfig::new(10, 3);
        let mut rng = cfg.rng();
        for _ in 0..2000 {
            assert!(draw_treewidth_bound(&cfg, &mut rng) >= 1);
        }
    }

    #[test]
    fn treewidth_cap_clamps_every_draw() {
        let cfg = SamplerConfig::new(20, 4).with_treewidth_cap(1);
        let mut rng = cfg.rng();
        for _ in 0..2000 {
            assert!(draw_treewidth_bound(&cfg, &mut rng) <= 1);
        }
    }

    #[test]
    fn poisson_sample_mean_tracks_lambda() {
        let cfg = SamplerConfig::new(41, 9).with_lambda_mode(LambdaMode::PaperStrict);
        let mut rng = cfg.rng();
        let poisson = Poisson::new(cfg.lambda()).unwrap();
        let draws = 100_000;
        let sum: f64 = (0..draws).map(|_| poisson.sample(&mut rng)).sum();
        assert!((sum / draws as f64 - cfg.lambda()).abs() < 0.01);
    }

    #[test]
    fn degenerate_probabilities_return_full_ktree() {
        let mut cfg = SamplerConfig::new(4, 5);
        cfg.edge_keep_prob = 1.0;
        cfg.vertex_keep_prob = 1.0;
        cfg.treewidth_cap = Some(3);
        let mut rng = cfg.rng();
        for _ in 0..50 {
            let sample = sample_pattern(&cfg, &mut rng);
            let s = sample.pattern.vertex_count();
            let k = sample.drawn_k;
            if s <= k + 1 {
                assert_eq!(sample.pattern, generate(Family::Complete, s).unwrap());
            } else {
                assert_eq!(sample.pattern.edge_count(), k * s - k * (k + 1) / 2);
            }
        }
    }

    #[test]
    fn every_sample_validates_with_bounded_width() {
        let cfg = SamplerConfig::new(8, 11);
        let mut rng = cfg.rng();
        for _ in 0..500 {
            let sample = sample_pattern(&cfg, &mut rng);
            assert!(validate(&sample.pattern, &sample.decomposition).is_ok());
            assert!(sample.decomposition.width() <= sample.drawn_k as isize);
            assert!((1..=8).contains(&sample.pattern.vertex_count()));
        }
    }

    #[test]
    fn small_patterns_show_up() {
        // Full-support smoke test: K2 and C3 both appear at n = 6.
        let cfg = SamplerConfig::new(6, 13);
        let mut rng = cfg.rng();
        let k2 = generate(Family::Complete, 2).unwrap();
        let c3 = generate(Family::Cycle, 3).unwrap();
        let (mut saw_k2, mut saw_c3) = (false, false);
        for _ in 0..20_000 {
            let sample = sample_pattern(&cfg, &mut rng);
            saw_k2 |= sample.pattern == k2;
            saw_c3 |= sample.pattern == c3;
            if saw_k2 && saw_c3 {
                return;
            }
        }
        panic!("K2 seen: {saw_k2}, C3 seen: {saw_c3}");
    }

    #[test]
    fn banks_are_bit_reproducible() {
        let cfg = SamplerConfig::new(41, 7);
        let a = sample_bank(&cfg, 50);
        let b = sample_bank(&cfg, 50);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.len(), 50);
        assert!(a.patterns.iter().all(|p| p.pattern.vertex_count() <= 41));

        let other = sample_bank(&SamplerConfig::new(41, 8), 50);
        assert_ne!(a.to_json(), other.to_json());
    }

    #[test]
    fn bank_json_round_trips() {
        let cfg = SamplerConfig::new(9, 21).with_treewidth_cap(2);
        let bank = sample_bank(&cfg, 12);
        let parsed = PatternBank::from_json(&bank.to_json()).unwrap();
        assert_eq!(parsed, bank);
    }

    #[test]
    fn bank_json_rejects_garbage() {
        assert!(matches!(
            PatternBank::from_json("{"),
            Err(SamplerError::BadBankJson(_))
        ));
        let bad_edges = r#"{
          "config": {"n": 2, "d": 2, "lambda_mode": "shifted",
                     "size_mode": "uniform-1-to-n", "vertex_keep_prob": 1.0,
                     "edge_keep_prob": 0.5, "treewidth_cap": null, "seed": 0},
          "patterns": [{"ordinal": 0, "drawn_k": 1, "drawn_size": 2,
                        "vertices": 2, "edges": [[0, 5]], "bags": [[0, 1]],
                        "tree_edges": []}]
        }"#;
        assert!(matches!(
            PatternBank::from_json(bad_edges),
            Err(SamplerError::BadBankGraph { ordinal: 0, .. })
        ));
    }

    #[test]
    fn config_validation_catches_bad_ranges() {
        let mut cfg = SamplerConfig::new(5, 0);
        assert!(cfg.validate().is_ok());
        cfg.vertex_keep_prob = 0.0;
        assert!(matches!(
            cfg.validate(),
            Err(SamplerError::BadVertexKeep(_))
        ));
        cfg.vertex_keep_prob = 0.5;
        cfg.edge_keep_prob = 1.5;
        assert!(matches!(cfg.validate(), Err(SamplerError::BadEdgeKeep(_))));
        assert!(SamplerConfig::new(0, 0).validate().is_err());
    }

    #[test]
    fn distinguishes_c6_from_two_triangles() {
        let c6 = generate(Family::Cycle, 6).unwrap();
        let c3 = generate(Family::Cycle, 3).unwrap();
        let two_c3 = crate::graph::disjoint_union(&c3, &c3);
        // Sanity: C3 itself separates the pair.
        assert_eq!(hom_bruteforce(&c3, &c6).unwrap(), 0u32.into());
        assert_eq!(hom_bruteforce(&c3, &two_c3).unwrap(), 12u32.into());

        let cfg = SamplerConfig::new(6, 17);
        let run = sample_until_distinguished(&cfg, &c6, &two_c3, 10_000).unwrap();
        let index = run.distinguishing.expect("pair must be distinguished");
        assert_eq!(run.bank.len(), index + 1);
    }

    #[test]
    fn identical_graphs_exhaust_the_cap() {
        let c4 = generate(Family::Cycle, 4).unwrap();
        let cfg = SamplerConfig::new(4, 19);
        let run = sample_until_distinguished(&cfg, &c4, &c4, 40).unwrap();
        assert!(run.distinguishing.is_none());
        assert_eq!(run.bank.len(), 40);
    }

    #[test]
    fn explicit_banks_carry_single_bag_certificates() {
        let c4 = generate(Family::Cycle, 4).unwrap();
        let bank = PatternBank::explicit([c4.clone()]);
        assert_eq!(bank.len(), 1);
        assert!(validate(&bank.patterns[0].pattern, &bank.patterns[0].decomposition).is_ok());
        assert_eq!(bank.patterns[0].decomposition.width(), 3);
    }
}
