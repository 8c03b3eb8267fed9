//! JSON-string operations behind the demo page. Each takes and returns JSON
//! so the wasm boundary stays a single string in each direction; errors come
//! back as `{"error": "..."}` from the bindings layer.

use serde::{Deserialize, Serialize};

use homembed_core::embedding::{embed, gram, gram_min, EmbedMode};
use homembed_core::graph::Graph;
use homembed_core::graph6::parse_graph6_file;
use homembed_core::sampler::{
    sample_bank, sample_until_distinguished, LambdaMode, SamplerConfig, SizeMode,
};
use homembed_core::wl::wl1_signature;

#[derive(Deserialize)]
pub struct DemoConfig {
    pub n: usize,
    #[serde(default = "defaults::count")]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::d")]
    pub d: usize,
    #[serde(default = "defaults::lambda_mode")]
    pub lambda_mode: String,
    #[serde(default)]
    pub treewidth_cap: Option<usize>,
    #[serde(default = "defaults::vertex_keep")]
    pub vertex_keep_prob: f64,
    #[serde(default = "defaults::edge_keep")]
    pub edge_keep_prob: f64,
}

mod defaults {
    pub fn count() -> usize {
        24
    }
    pub fn d() -> usize {
        2
    }
    pub fn lambda_mode() -> String {
        "shifted".into()
    }
    pub fn vertex_keep() -> f64 {
        1.0
    }
    pub fn edge_keep() -> f64 {
        0.5
    }
}

impl DemoConfig {
    fn sampler_config(&self) -> Result<SamplerConfig, String> {
        let lambda_mode = match self.lambda_mode.as_str() {
            "shifted" => LambdaMode::Shifted,
            "paper-strict" => LambdaMode::PaperStrict,
            other => return Err(format!("unknown lambda mode `{other}`")),
        };
        let cfg = SamplerConfig {
            n: self.n,
            d: self.d,
            lambda_mode,
            size_mode: SizeMode::Uniform1ToN,
            vertex_keep_prob: self.vertex_keep_prob,
            edge_keep_prob: self.edge_keep_prob,
            treewidth_cap: self.treewidth_cap,
            seed: self.seed,
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct PatternView {
    ordinal: usize,
    drawn_k: usize,
    width: isize,
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct SampleView {
    lambda: f64,
    patterns: Vec<PatternView>,
}

/// Draws a bank from the config and returns the patterns with their draw
/// metadata, ready to render.
pub fn sample_patterns(config_json: &str) -> Result<String, String> {
    let config: DemoConfig = serde_json::from_str(config_json).map_err(|e| e.to_string())?;
    if config.count == 0 || config.count > 500 {
        return Err("count must be between 1 and 500".into());
    }
    let cfg = config.sampler_config()?;
    let bank = sample_bank(&cfg, config.count);
    let view = SampleView {
        lambda: cfg.lambda(),
        patterns: bank
            .patterns
            .iter()
            .map(|p| PatternView {
                ordinal: p.ordinal,
                drawn_k: p.drawn_k,
                width: p.decomposition.width(),
                vertices: p.pattern.vertex_count(),
                edges: p.pattern.edges().collect(),
            })
            .collect(),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct GramView {
    graph_ids: Vec<String>,
    sizes: Vec<usize>,
    kernel: String,
    mode: String,
    values: Vec<Vec<f64>>,
    distinguished_pairs: usize,
    pairs_total: usize,
}

fn parse_graphs(graphs_g6: &str) -> Result<Vec<Graph>, String> {
    let graphs = parse_graph6_file(graphs_g6).map_err(|e| e.to_string())?;
    if graphs.is_empty() {
        return Err("no graphs given".into());
    }
    if graphs.len() > 40 {
        return Err("at most 40 graphs in the demo".into());
    }
    Ok(graphs)
}

/// Embeds the graph6 dataset against a bank sampled from the config and
/// returns the Gram matrix for the heatmap, plus the distinguishability
/// count at the embedding level.
pub fn embedding_gram(graphs_g6: &str, config_json: &str, mode: &str) -> Result<String, String> {
    let graphs = parse_graphs(graphs_g6)?;
    let mut config: DemoConfig = serde_json::from_str(config_json).map_err(|e| e.to_string())?;
    let max_v = graphs.iter().map(Graph::vertex_count).max().unwrap_or(1);
    if config.n < max_v {
        config.n = max_v; // the bank must cover the dataset
    }
    if config.count == 0 || config.count > 500 {
        return Err("count must be between 1 and 500".into());
    }
    let mode: EmbedMode = mode.parse().map_err(|_| format!("unknown mode `{mode}`"))?;
    let cfg = config.sampler_config()?;
    let bank = sample_bank(&cfg, config.count);
    let matrix = embed(&graphs, &bank, mode).map_err(|e| e.to_string())?;
    let gram_matrix = if mode == EmbedMode::Truncated {
        gram_min(&matrix).map_err(|e| e.to_string())?
    } else {
        gram(&matrix).map_err(|e| e.to_string())?
    };
    let report =
        homembed_core::embedding::distinguishability_report(&matrix, None, 1e-9)
            .map_err(|e| e.to_string())?;
    let view = GramView {
        graph_ids: gram_matrix.graph_ids.clone(),
        sizes: graphs.iter().map(Graph::vertex_count).collect(),
        kernel: gram_matrix.kernel.as_str().to_string(),
        mode: mode.as_str().to_string(),
        values: gram_matrix.values,
        distinguished_pairs: report.pairs_distinguished,
        pairs_total: report.pairs_total,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct DistinguishView {
    left_vertices: usize,
    right_vertices: usize,
    wl_equal: bool,
    distinguished: bool,
    tried: usize,
    index: Option<usize>,
    pattern: Option<PatternView>,
    hom_left: Option<String>,
    hom_right: Option<String>,
}

/// Grows a bank until some pattern separates the two graphs (or `cap` draws
/// pass). Reports the distinguishing pattern and both exact counts, plus
/// whether 1-WL alone could have told them apart.
pub fn distinguish_pair(
    g6_left: &str,
    g6_right: &str,
    seed: u64,
    cap: usize,
) -> Result<String, String> {
    let left = parse_graphs(g6_left)?
        .into_iter()
        .next()
        .ok_or("left graph missing")?;
    let right = parse_graphs(g6_right)?
        .into_iter()
        .next()
        .ok_or("right graph missing")?;
    if cap == 0 || cap > 20_000 {
        return Err("cap must be between 1 and 20000".into());
    }
    let n = left.vertex_count().max(right.vertex_count()).max(1);
    if n > 64 {
        return Err("demo graphs are limited to 64 vertices".into());
    }
    let cfg = SamplerConfig::new(n, seed);
    let run = sample_until_distinguished(&cfg, &left, &right, cap).map_err(|e| e.to_string())?;
    let wl_equal = wl1_signature(&left) == wl1_signature(&right);
    let view = match run.distinguishing {
        Some(index) => {
            let sample = &run.bank.patterns[index];
            let ntd = homembed_core::decomposition::make_nice(&sample.decomposition)
                .map_err(|e| e.to_string())?;
            let hom_left = homembed_core::hom::hom_dp(&sample.pattern, &ntd, &left)
                .map_err(|e| e.to_string())?;
            let hom_right = homembed_core::hom::hom_dp(&sample.pattern, &ntd, &right)
                .map_err(|e| e.to_string())?;
            DistinguishView {
                left_vertices: left.vertex_count(),
                right_vertices: right.vertex_count(),
                wl_equal,
                distinguished: true,
                tried: index + 1,
                index: Some(index),
                pattern: Some(PatternView {
                    ordinal: sample.ordinal,
                    drawn_k: sample.drawn_k,
                    width: sample.decomposition.width(),
                    vertices: sample.pattern.vertex_count(),
                    edges: sample.pattern.edges().collect(),
                }),
                hom_left: Some(hom_left.to_string()),
                hom_right: Some(hom_right.to_string()),
            }
        }
        None => DistinguishView {
            left_vertices: left.vertex_count(),
            right_vertices: right.vertex_count(),
            wl_equal,
            distinguished: false,
            tried: run.bank.len(),
            index: None,
            pattern: None,
            hom_left: None,
            hom_right: None,
        },
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_patterns_round_trip() {
        let out = sample_patterns(r#"{"n": 8, "count": 12, "seed": 3}"#).unwrap();
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["patterns"].as_array().unwrap().len(), 12);
        assert!(value["lambda"].as_f64().unwrap() > 0.0);
        // Deterministic given the seed.
        assert_eq!(out, sample_patterns(r#"{"n": 8, "count": 12, "seed": 3}"#).unwrap());
    }

    #[test]
    fn sample_patterns_rejects_bad_input() {
        assert!(sample_patterns("{}").is_err());
        assert!(sample_patterns(r#"{"n": 5, "count": 0}"#).is_err());
        assert!(sample_patterns(r#"{"n": 5, "lambda_mode": "weird"}"#).is_err());
    }

    #[test]
    fn gram_heatmap_on_the_classic_pair() {
        // C6 and C3 ⊎ C3 under a forest bank: identical rows, so the kernel
        // can't separate them and the report says zero distinguished pairs.
        let out = embedding_gram(
            "EhEG\nEwCW\n",
            r#"{"n": 6, "count": 40, "seed": 1, "treewidth_cap": 1}"#,
            "hom",
        )
        .unwrap();
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["pairs_total"], 1);
        assert_eq!(value["distinguished_pairs"], 0);
        assert_eq!(value["values"][0][1], value["values"][0][0]);
    }

    #[test]
    fn gram_heatmap_truncated_uses_min_kernel() {
        let out = embedding_gram(
            "A_\nBw\n",
            r#"{"n": 4, "count": 30, "seed": 2}"#,
            "truncated",
        )
        .unwrap();
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["kernel"], "min-kernel");
    }

    #[test]
    fn distinguish_finds_a_witness_for_c6_vs_triangles() {
        let out = distinguish_pair("EhEG", "EwCW", 17, 10_000).unwrap();
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["wl_equal"], true);
        assert_eq!(value["distinguished"], true);
        assert_ne!(value["hom_left"], value["hom_right"]);
        assert!(value["pattern"]["vertices"].as_u64().unwrap() >= 3);
    }

    #[test]
    fn distinguish_exhausts_on_identical_graphs() {
        let out = distinguish_pair("EhEG", "EhEG", 5, 50).unwrap();
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["distinguished"], false);
        assert_eq!(value["tried"], 50);
    }
}
