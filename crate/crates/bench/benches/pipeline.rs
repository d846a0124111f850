use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cardtext::background::eliminate_background;
use cardtext::classifier::{classify_cc_with_ratio, derive_thresholds};
use cardtext::components::label_components;
use cardtext_bench::{fixture_card, PipelineConfig};

fn bench_stages(c: &mut Criterion) {
    let cfg = PipelineConfig::default();
    let card = fixture_card();

    c.bench_function("background_elimination_1024x768", |b| {
        b.iter(|| eliminate_background(&card.image, &cfg.background_params()).unwrap())
    });

    let (bg, grid) = eliminate_background(&card.image, &cfg.background_params()).unwrap();
    c.bench_function("label_components_1024x768", |b| {
        b.iter(|| label_components(&grid, cfg.connectivity))
    });

    let ccs = label_components(&grid, cfg.connectivity);
    let th = derive_thresholds(card.image.width, card.image.height, &cfg);
    c.bench_function("classify_all_ccs_1024x768", |b| {
        b.iter(|| {
            ccs.iter()
                .map(|cc| classify_cc_with_ratio(cc, &bg, &grid, &th, cfg.ra_region).unwrap())
                .count()
        })
    });
}

fn bench_full_pipeline(c: &mut Criterion) {
    let cfg = PipelineConfig::default();
    let card = fixture_card();
    let mut group = c.benchmark_group("full_pipeline");
    for (w, h) in [(640u32, 480u32), (1024, 768), (2048, 1536)] {
        let scaled = card.image.resize_bilinear(w, h);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{w}x{h}")), &scaled, |b, img| {
            b.iter(|| cardtext::run(img, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_stages, bench_full_pipeline);
criterion_main!(benches);
