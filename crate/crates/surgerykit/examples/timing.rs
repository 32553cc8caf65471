use std::time::Instant;
use surgerykit::forms::gen;

fn main() {
    let mut rng = gen::rng(7);
    for t in 0..6 {
        let t0 = Instant::now();
        let c = gen::random_complex(&mut rng, 0, 2, 1);
        println!("complex total rank {} in {:?}", c.total_rank(), t0.elapsed());
        let t0 = Instant::now();
        let q = gen::sample_quadratic(&mut rng, &c, (t % 4) as i64);
        println!("  quadratic sampled={} in {:?}", q.is_some(), t0.elapsed());
        let d = gen::random_complex(&mut rng, 0, 2, 1);
        let t0 = Instant::now();
        let p = gen::sample_pair(&mut rng, &c, &d, (t % 3) as i64);
        println!("  pair sampled={} in {:?}", p.is_some(), t0.elapsed());
    }
}
