use gysin_core::burnside::BurnsideFunctor;
use gysin_core::group::FiniteGroup;
use gysin_core::laws::verify_category_laws;
use std::time::Instant;

fn main() {
    let group = FiniteGroup::symmetric(3).unwrap();
    let e = BurnsideFunctor::new(&group);
    let t0 = Instant::now();
    for report in verify_category_laws(&e, 20, 0xC0FFEE) {
        println!("{:>22}: {} ({:.2?} cumulative)", report.name, report.passed, t0.elapsed());
    }
}
