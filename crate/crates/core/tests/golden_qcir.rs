//! Golden-file checks for the QCIR emitter.

use qsms::encoders::{augment_with_qstatic, encode_none, encode_triangle_free_non_k_colorable};
use qsms::graph::CellOrder;
use qsms::qcir::{emit_qcir, parse_qcir};

#[test]
fn triangle_free_n5_k3_matches_golden_bytes() {
    let q = encode_triangle_free_non_k_colorable(5, 3, false).unwrap();
    let text = emit_qcir(&q);
    let golden = include_str!("golden/triangle_free_n5_k3.qcir");
    assert_eq!(text, golden);
}

#[test]
fn emission_is_deterministic() {
    let a = emit_qcir(&encode_triangle_free_non_k_colorable(5, 3, true).unwrap());
    let b = emit_qcir(&encode_triangle_free_non_k_colorable(5, 3, true).unwrap());
    assert_eq!(a, b);
    let q = augment_with_qstatic(&encode_none(4), &CellOrder::lex(4));
    assert_eq!(emit_qcir(&q), emit_qcir(&q));
}

#[test]
fn golden_file_roundtrips() {
    let golden = include_str!("golden/triangle_free_n5_k3.qcir");
    let q = parse_qcir(golden).unwrap();
    assert_eq!(emit_qcir(&q), golden);
}
