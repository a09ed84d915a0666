#![no_main]

use graphboost::io::{read_model, write_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(model) = read_model(text) else { return };
    let written = write_model(&model);
    let again = read_model(&written).expect("written models parse");
    assert_eq!(write_model(&again), written);
});
