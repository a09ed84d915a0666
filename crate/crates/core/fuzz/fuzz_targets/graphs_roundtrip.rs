#![no_main]

use graphboost::io::{parse_graphs, write_graphs};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(data) = parse_graphs(text) else { return };
    let written = write_graphs(&data);
    let again = parse_graphs(&written).expect("written datasets parse");
    assert_eq!(again.ids, data.ids);
    assert_eq!(again.graphs.len(), data.graphs.len());
    assert_eq!(write_graphs(&again), written);
});
