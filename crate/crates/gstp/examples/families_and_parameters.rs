//! Named graph families and their exact structural parameters.

use gstp::instance::families::{star_with_spoke_terminals, triangles, triples, windmill};
use gstp::instance::params::{parameter, Param};
use gstp::instance::{augment, AugmentMode};

fn main() {
    for i in 2..=6 {
        let vc = parameter(&windmill(i), Param::VertexCover).unwrap();
        let star = augment(&star_with_spoke_terminals(i), AugmentMode::Clique).graph;
        let star_vc = parameter(&star, Param::VertexCover).unwrap();
        let fen = parameter(&triangles(i), Param::FeedbackEdgeNumber).unwrap();
        let aug = augment(&triples(i), AugmentMode::Vertex).graph;
        let aug_fen = parameter(&aug, Param::FeedbackEdgeNumber).unwrap();
        println!(
            "i={i}: vc(windmill)={vc} vc(clique star)={star_vc} fen(triangles)={fen} fen(vertex triples)={aug_fen}"
        );
    }
}
