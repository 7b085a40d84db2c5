use std::path::Path;

use proptest::prelude::*;

use stabhom::algebra::Algebra;
use stabhom::hom::hom_space;
use stabhom::io::read_algebra;
use stabhom::module::FdModule;
use stabhom::resolution::{cosyzygy, syzygy};
use stabhom::sample::Sampler;
use stabhom::stable::{Verdict, Workbench};
use stabhom::tensor::tensor;

fn ring(name: &str) -> Algebra {
    read_algebra(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(format!("{name}.alg"))).unwrap()
}

fn any_ring() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["dual2", "trunc3", "gf5", "intro", "upper"])
}

fn self_injective() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["dual2", "trunc3"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tor_shifts_along_syzygies(name in any_ring(), seed in any::<u64>()) {
        let a = ring(name);
        let mut s = Sampler::new(seed);
        let m = s.module(&a, 2).dual();
        let n = s.module(&a, 2);
        let wb = Workbench::default();
        let om = syzygy(&m, 1);
        for i in 1..=3 {
            prop_assert_eq!(wb.tor(&m, &n, i + 1).unwrap(), wb.tor(&om, &n, i).unwrap());
        }
    }

    #[test]
    fn ext_shifts_along_syzygies_and_cosyzygies(name in any_ring(), seed in any::<u64>()) {
        let a = ring(name);
        let mut s = Sampler::new(seed);
        let m = s.module(&a, 2);
        let n = s.module(&a, 2);
        let wb = Workbench::default();
        let om = syzygy(&m, 1);
        let cn = cosyzygy(&n, 1);
        for i in 1..=3 {
            let e = wb.ext(&m, &n, i + 1).unwrap();
            prop_assert_eq!(e, wb.ext(&om, &n, i).unwrap());
            prop_assert_eq!(e, wb.ext(&m, &cn, i).unwrap());
        }
    }

    #[test]
    fn tor_zero_is_the_tensor_product(name in any_ring(), seed in any::<u64>()) {
        let a = ring(name);
        let mut s = Sampler::new(seed);
        let m = s.module(&a, 2).dual();
        let n = s.module(&a, 2);
        prop_assert_eq!(Workbench::default().tor(&m, &n, 0).unwrap(), tensor(&m, &n).unwrap().dim());
    }

    #[test]
    fn hom_into_a_dual_is_the_dual_of_a_tensor(name in any_ring(), seed in any::<u64>()) {
        let a = ring(name);
        let mut s = Sampler::new(seed);
        let m = s.module(&a, 2);
        let n = s.module(&a, 2).dual();
        prop_assert_eq!(hom_space(&m, &n.dual()).unwrap().dim(), tensor(&n, &m).unwrap().dim());
        prop_assert_eq!(&m.dual().dual(), &m);
    }

    #[test]
    fn stable_homology_shifts_with_syzygies(name in self_injective(), seed in any::<u64>()) {
        let a = ring(name);
        let mut s = Sampler::new(seed);
        let m = s.module(&a, 2);
        let n = s.module(&a, 2);
        let wb = Workbench::default();
        let om = syzygy(&m, 1);
        let cn = cosyzygy(&n, 1);
        for i in -3..=3 {
            let here = wb.stor(&m, &n, i).unwrap().dimension();
            prop_assert!(here.is_some());
            prop_assert_eq!(here, wb.stor(&om, &n, i - 1).unwrap().dimension());
            prop_assert_eq!(here, wb.stor(&m, &cn, i + 1).unwrap().dimension());
        }
    }

    #[test]
    fn stable_and_absolute_homology_agree_in_high_degrees(name in self_injective(), seed in any::<u64>()) {
        let a = ring(name);
        let mut s = Sampler::new(seed);
        let m = s.module(&a, 2);
        let n = s.module(&a, 2);
        let wb = Workbench::default();
        let g = wb.gdim(&m).dim().finite().unwrap();
        for i in g as i64 + 1..=g as i64 + 4 {
            prop_assert_eq!(wb.stor(&m, &n, i).unwrap().dimension(), Some(wb.tor(&m, &n, i).unwrap()));
            prop_assert_eq!(wb.ttor(&m, &n, i).unwrap(), wb.tor(&m, &n, i).unwrap());
        }
    }

    #[test]
    fn balance_and_the_exact_sequence_hold_over_a_gorenstein_non_commutative_ring(seed in any::<u64>()) {
        let a = ring("upper");
        let mut s = Sampler::new(seed);
        let m = s.module(&a, 2).dual();
        let n = s.module(&a, 2);
        let wb = Workbench::default();
        let bal = wb.balancedness_check(&m, &n, -3, 3).unwrap();
        prop_assert!(bal.rows.iter().all(|r| r.verdict == Verdict::Pass), "{:?}", bal.rows);
        let table = wb.exact_sequence_consistency(&m, &n, -2, 3).unwrap();
        prop_assert!(!table.failed(), "{:?}", table.rows);
    }

    #[test]
    fn reruns_are_identical(name in any_ring(), seed in any::<u64>()) {
        let a = ring(name);
        let run = || {
            let mut s = Sampler::new(seed);
            let m = s.module(&a, 2);
            let wb = Workbench::default();
            (m.clone(), wb.pd(&m), (0..4).map(|i| wb.ext(&m, &m, i).unwrap()).collect::<Vec<_>>())
        };
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn syzygies_of_projectives_vanish() {
    let a = ring("upper");
    for m in [FdModule::regular(&a), FdModule::free(&a, 2)] {
        assert!(syzygy(&m, 1).is_zero());
    }
}
