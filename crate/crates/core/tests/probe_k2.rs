mod support;
use modgraph_core::encodings::{normal_form_formula, Alphabet, GarbageMode, HomVariant};
use modgraph_core::logic::{model_check_with_stats, Budget, Formula, ModalAction, Verdict};
use support::*;

#[test]
fn probe_double_two() {
    let system = load_rules("arith.rules");
    let start = double_of(2);
    let alphabet = Alphabet::from_system(&system).union(&Alphabet::from_graph(&start));
    let goal = Formula::diamond(ModalAction::Universal, Formula::prop("succ"));
    let formula = normal_form_formula(&system, &goal, HomVariant::AnywhereNonInjective, GarbageMode::Neutralize, &alphabet).unwrap();
    let budget = Budget { max_states: 5_000, max_fresh_nodes: 64 };
    let t0 = std::time::Instant::now();
    let (result, stats) = model_check_with_stats(&start, &formula, &budget);
    eprintln!("double(2): {:?} in {:?}, {} states, {} fresh", result.verdict, t0.elapsed(), stats.states_explored, stats.fresh_nodes);
    assert_eq!(result.verdict, Verdict::True);
}
