use proptest::prelude::*;
use selfsim_core::repr::{
    conjugates_to_adding_machine, example3_closed_form, phi_rep, prop4_conjugator, transversal_conjugator,
    FgAbelianGroup, Transversal, VirtualEndo,
};
use selfsim_core::tree::{self_power_generator, AutExpr, Context, Engine, Forest, Portrait, System};
use selfsim_core::Permutation;

fn cyclic_halving() -> VirtualEndo {
    let g = FgAbelianGroup::new(1, vec![]).unwrap();
    VirtualEndo::new(g, vec![vec![2]], vec![vec![1]]).unwrap()
}

fn closed_form_portrait(k: i64, l: i64, depth: usize) -> Portrait {
    let ctx = Context::uniform(2, depth).unwrap();
    let mut sys = System::new(ctx);
    let a = sys.declare("alpha").unwrap();
    let entries = vec![AutExpr::gen_pow(a, ctx.series(&[k - l])), AutExpr::gen_pow(a, ctx.series(&[l - k + 1]))];
    sys.define(a, Permutation::full_cycle(2), Some(entries), None).unwrap();
    Engine::new(sys).portrait(&AutExpr::gen(a), depth).unwrap()
}

#[test]
fn cyclic_group_transversals_match_closed_form() {
    let endo = cyclic_halving();
    for k in 0..3 {
        for l in 0..3 {
            let t = Transversal::new(&endo, vec![vec![2 * k], vec![2 * l + 1]]).unwrap();
            let mut mach = phi_rep(&endo, &t);
            let mut forest = Forest::new(2);
            let n = mach.node(&mut forest, &[1], 8).unwrap();
            assert_eq!(Portrait::from_node(&forest, n), closed_form_portrait(k, l, 8), "k={k} l={l}");
        }
    }
}

#[test]
fn kernel_is_invisible_for_simple_triple() {
    let endo = cyclic_halving();
    let t = Transversal::new(&endo, vec![vec![0], vec![1]]).unwrap();
    let mut mach = phi_rep(&endo, &t);
    let mut forest = Forest::new(2);
    assert!(mach.kernel_witnesses(&mut forest, &[vec![1], vec![5]], 8, 1000).unwrap().is_empty());
}

#[test]
fn torsion_triple_kernel_is_reported() {
    // G = Z + Z/2, H = 2Z + Z/2, f kills the torsion: the torsion generator is in the core.
    let g = FgAbelianGroup::new(1, vec![2]).unwrap();
    let endo = VirtualEndo::new(g, vec![vec![2, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 0]]).unwrap();
    let t = Transversal::new(&endo, vec![vec![0, 0], vec![1, 0]]).unwrap();
    let mut mach = phi_rep(&endo, &t);
    let mut forest = Forest::new(2);
    let w = mach.kernel_witnesses(&mut forest, &[vec![0, 1]], 6, 1000).unwrap();
    assert_eq!(w, vec![vec![0, 1]]);
}

fn plane_triple() -> (VirtualEndo, Transversal) {
    // G = Z^2, H = {(a, b) : a + b even}, f sends the diagonals (1, 1) and (1, -1) to the axes.
    let g = FgAbelianGroup::new(2, vec![]).unwrap();
    let endo = VirtualEndo::new(g, vec![vec![1, 1], vec![1, -1]], vec![vec![0, 1], vec![1, 0]]).unwrap();
    let t = Transversal::new(&endo, vec![vec![0, 0], vec![1, 0]]).unwrap();
    (endo, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn representation_is_a_homomorphism(a in -6i64..6, b in -6i64..6, c in -6i64..6, d in -6i64..6) {
        let (endo, t) = plane_triple();
        let mut mach = phi_rep(&endo, &t);
        let mut f = Forest::new(2);
        let x = mach.node(&mut f, &[a, b], 7).unwrap();
        let y = mach.node(&mut f, &[c, d], 7).unwrap();
        let xy = mach.node(&mut f, &[a + c, b + d], 7).unwrap();
        prop_assert_eq!(f.mul(x, y), xy);
    }

    #[test]
    fn subgroup_fixes_first_level(a in -6i64..6, b in -6i64..6) {
        let (endo, t) = plane_triple();
        let h = vec![a + b, a - b];
        let mut mach = phi_rep(&endo, &t);
        let mut f = Forest::new(2);
        let n = mach.node(&mut f, &h, 7).unwrap();
        prop_assert!(f.perm(n).is_identity());
        let image = endo.apply(&h).unwrap();
        let below = mach.node(&mut f, &image, 6).unwrap();
        prop_assert_eq!(f.child(n, 0), below);
    }

    #[test]
    fn transversal_change_conjugates(h1 in -3i64..3, h2 in -3i64..3, k in 0i64..3, l in 0i64..3) {
        let endo = cyclic_halving();
        let t = Transversal::new(&endo, vec![vec![2 * k], vec![2 * l + 1]]).unwrap();
        let ch = transversal_conjugator(&endo, &t, &[vec![2 * h1], vec![2 * h2]], Context::uniform(2, 8).unwrap()).unwrap();
        prop_assert!(ch.forward_holds);
        prop_assert!(ch.reverse_holds);
    }
}

#[test]
fn transversal_change_in_the_plane() {
    let (endo, t) = plane_triple();
    let ch = transversal_conjugator(&endo, &t, &[vec![1, 1], vec![2, 0]], Context::uniform(2, 7).unwrap()).unwrap();
    assert!(ch.forward_holds && ch.reverse_holds);
}

#[test]
fn conjugator_through_rotated_roots() {
    // m = 3, beta = (e, e, beta^2) sigma: beta^2 has root sigma^2, so later stages rotate.
    let ctx = Context::uniform(3, 8).unwrap();
    let mut sys = System::new(ctx);
    let b =
        self_power_generator(&mut sys, "b", Permutation::full_cycle(3), &[ctx.zero(), ctx.zero(), ctx.series(&[2])])
            .unwrap();
    let mut eng = Engine::new(sys);
    let h = prop4_conjugator(&mut eng, b, 1).unwrap();
    assert!(h.stages.iter().any(|s| !s.rooted.is_identity()));
    assert!(conjugates_to_adding_machine(&mut eng, b, &h.expr(), 1).unwrap());
}

#[test]
fn conjugator_for_longer_gap() {
    let ctx = Context::uniform(2, 10).unwrap();
    let mut sys = System::new(ctx);
    let b =
        self_power_generator(&mut sys, "b", Permutation::full_cycle(2), &[ctx.zero(), ctx.series(&[0, 1, 1])]).unwrap();
    let mut eng = Engine::new(sys);
    let h = prop4_conjugator(&mut eng, b, 2).unwrap();
    assert!(conjugates_to_adding_machine(&mut eng, b, &h.expr(), 2).unwrap());
}

#[test]
fn sequence_conjugator_agrees_with_stagewise() {
    let ctx = Context::uniform(2, 10).unwrap();
    let mut sys = System::new(ctx);
    let q = ctx.series(&[1, 1]);
    let b = self_power_generator(&mut sys, "b", Permutation::full_cycle(2), &[ctx.zero(), q.clone()]).unwrap();
    let mut eng = Engine::new(sys);
    let closed = example3_closed_form(b, &q, 10).unwrap();
    assert!(conjugates_to_adding_machine(&mut eng, b, &closed, 1).unwrap());
    let staged = prop4_conjugator(&mut eng, b, 1).unwrap().expr();
    assert!(eng.equal_to_depth(&closed, &staged, 10).unwrap());
}
