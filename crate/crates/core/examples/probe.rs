// Scratch probe for acceptance-suite runtime and seed choices. Not shipped.
use std::time::Instant;

use homembed_core::embedding::{distinguishability_report, embed, EmbedMode, REAL_TOLERANCE};
use homembed_core::graph::generate_csl;
use homembed_core::sampler::{draw_treewidth_bound, sample_bank, LambdaMode, SamplerConfig};

fn main() {
    let skips = [2usize, 3, 4, 5, 6, 9, 11, 12, 13, 16];
    let graphs: Vec<_> = skips.iter().map(|&s| generate_csl(41, s).unwrap()).collect();

    // Criterion 6 probe: paper-strict draw statistics at n=41.
    for seed in [1u64, 2, 3] {
        let cfg = SamplerConfig::new(41, seed).with_lambda_mode(LambdaMode::PaperStrict);
        let mut rng = cfg.rng();
        let draws = 100_000;
        let mut sum_k = 0.0f64;
        let mut sum_cost = 0.0f64;
        let mut max_k = 0usize;
        for _ in 0..draws {
            let k = draw_treewidth_bound(&cfg, &mut rng);
            sum_k += k as f64;
            sum_cost += 41f64.powi(k as i32 + 1);
            max_k = max_k.max(k);
        }
        let lambda = cfg.lambda();
        println!(
            "seed {seed}: mean_k={:.5} (lambda={:.5}, diff={:+.5}) mean_cost={:.0} (4n^3={}) max_k={max_k}",
            sum_k / draws as f64,
            lambda,
            sum_k / draws as f64 - lambda,
            sum_cost / draws as f64,
            4 * 41usize.pow(3)
        );
    }

    // Criterion 4 probe: uncapped shifted bank at n=41 over the CSL classes.
    for seed in [101u64, 102, 103] {
        let cfg = SamplerConfig::new(41, seed);
        let bank = sample_bank(&cfg, 200);
        let max_k = bank.patterns.iter().map(|p| p.drawn_k).max().unwrap();
        let max_width = bank
            .patterns
            .iter()
            .map(|p| p.decomposition.width())
            .max()
            .unwrap();
        let start = Instant::now();
        let emb = embed(&graphs, &bank, EmbedMode::Hom).unwrap();
        let elapsed = start.elapsed();
        let labels: Vec<String> = skips.iter().map(|s| s.to_string()).collect();
        let report = distinguishability_report(&emb, Some(&labels), REAL_TOLERANCE).unwrap();
        println!(
            "seed {seed}: max_k={max_k} max_width={max_width} embed={:.1?} distinguished={}/{}",
            elapsed, report.pairs_distinguished, report.pairs_total
        );
    }

    // Capped (forest) bank cost probe.
    let cfg = SamplerConfig::new(41, 424242).with_treewidth_cap(1);
    let bank = sample_bank(&cfg, 500);
    let start = Instant::now();
    let emb = embed(&graphs, &bank, EmbedMode::Hom).unwrap();
    let report = distinguishability_report(&emb, None, REAL_TOLERANCE).unwrap();
    println!(
        "capped: embed={:.1?} distinguished={}/{}",
        start.elapsed(),
        report.pairs_distinguished,
        report.pairs_total
    );
}
