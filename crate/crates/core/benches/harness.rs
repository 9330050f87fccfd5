use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use minsynth::bench::random_corpus;
use minsynth::compile::{pipeline_brzozowski_explicit, pipeline_hopcroft, CompileOptions};
use minsynth::par;

fn batch(c: &mut Criterion) {
    let corpus = random_corpus(48, 1, 3, 10).unwrap();
    let opts: Vec<_> = corpus
        .iter()
        .map(|i| (i.formula.clone(), CompileOptions { alphabet: Some(i.partition.props()), ..Default::default() }))
        .collect();
    let work = |(f, o): &(minsynth::Formula, CompileOptions)| {
        let (h, _) = pipeline_hopcroft(f, o).unwrap();
        let (b, _) = pipeline_brzozowski_explicit(f, o).unwrap();
        h.num_states() + b.num_states()
    };

    let mut g = c.benchmark_group("compile_batch");
    g.sample_size(10);
    g.bench_with_input(BenchmarkId::new("sequential", opts.len()), &opts, |b, xs| {
        b.iter(|| par::map_sequential(xs, work))
    });
    g.bench_with_input(BenchmarkId::new("parallel", opts.len()), &opts, |b, xs| b.iter(|| par::map(xs, work)));
    g.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
