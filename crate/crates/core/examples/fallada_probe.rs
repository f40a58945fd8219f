use rootnum::arith::FactorBudget;
use rootnum::averaging::{av_rational, w_sample, Sector, LatticeCoset};
use rootnum::fiber::FiberEvaluator;
use rootnum::poly::parse_ratfunc;
use rootnum::surface::EllipticSurface;
use std::time::Instant;

fn main() {
    // f = (t^5-1)/(t-1), g = 6(t^7-1)/(t-1)
    // c4 = 144 f (f^3 - g^2)^2, c6 = 1728 g (f^3 - g^2)^3
    let f = parse_ratfunc("(t^5 - 1)/(t - 1)").unwrap();
    let g = parse_ratfunc("6(t^7 - 1)/(t - 1)").unwrap();
    let fc = f.pow(3).unwrap().sub(&g.pow(2).unwrap());
    let c4 = parse_ratfunc("144").unwrap().mul(&f).mul(&fc.pow(2).unwrap());
    let c6 = parse_ratfunc("1728").unwrap().mul(&g).mul(&fc.pow(3).unwrap());
    let s = EllipticSurface::new(c4, c6).unwrap();
    let t0 = Instant::now();
    let an = s.analyze().unwrap();
    println!("analysis in {:?}", t0.elapsed());
    println!("M = {}", an.m);
    for r in &an.places {
        println!("  place deg {} e4={:?} e6={:?} eD={} {:?}", r.place.degree(), r.e4, r.e6, r.e_d, r.klass);
    }
    let ev = FiberEvaluator::new(&an).unwrap();
    let budget = FactorBudget::default();
    // small sweep first
    let t0 = Instant::now();
    let rep = av_rational(|x, y| w_sample(&ev, None, &budget, x, y), &Sector::Quadrant(true, true), &LatticeCoset::full(), 30);
    println!("N=30 sweep in {:?}: count={} undet={} incomplete={} sum={}", t0.elapsed(), rep.count, rep.skipped.undetermined, rep.skipped.factorization_incomplete, rep.sum);
    let t0 = Instant::now();
    let rep = av_rational(|x, y| w_sample(&ev, None, &budget, x, y), &Sector::Quadrant(true, true), &LatticeCoset::full(), 100);
    println!("N=100 sweep in {:?}: count={} undet={} incomplete={} sum={} value={:?}", t0.elapsed(), rep.count, rep.skipped.undetermined, rep.skipped.factorization_incomplete, rep.sum, rep.value_f64);
}
