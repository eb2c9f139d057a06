use skeptic::{fixtures, ImpreciseBinaryTree, MarginalIntervalModel};

fn load<T: serde::de::DeserializeOwned>(name: &str) -> T {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tree_files_match_built_in_fixtures() {
    assert_eq!(load::<ImpreciseBinaryTree>("precise_chain.json"), fixtures::precise_chain_tree());
    assert_eq!(load::<ImpreciseBinaryTree>("outer_gap.json"), fixtures::outer_gap_tree());
    assert_eq!(load::<ImpreciseBinaryTree>("recursion.json"), fixtures::recursion_tree());
}

#[test]
fn model_file_matches_built_in_fixture() {
    assert_eq!(load::<MarginalIntervalModel>("interval_dominance.json"), fixtures::interval_dominance_model());
}
