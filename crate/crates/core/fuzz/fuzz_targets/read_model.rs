#![no_main]

use graphboost::graph::LabeledGraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(model) = graphboost::io::read_model(text) {
        // anything accepted must be usable
        let g = LabeledGraph::new(vec![0, 1, 0], vec![(0, 1, 0), (1, 2, 0)]).unwrap();
        let _ = model.predict_score(&g);
        for tree in &model.trees {
            let _ = tree.depth();
        }
    }
});
