use std::fmt::Write;

use super::BoundQuiver;

/// Graphviz rendering: vertices labeled by character tuple or name, arrows by layer label.
pub fn to_dot(q: &BoundQuiver) -> String {
    let mut out = String::from("digraph quiver {\n");
    for (i, v) in q.vertices.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{}\"];", escape(&v.to_string())).unwrap();
    }
    for a in &q.arrows {
        writeln!(
            out,
            "  v{} -> v{} [label=\"{}\", id=\"a{}\"];",
            a.source, a.target, a.label, a.id
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverbuild::{Arrow, ArrowLabel, Vertex};

    #[test]
    fn two_vertices() {
        let q = BoundQuiver {
            p: None,
            h_orders: vec![],
            vertices: vec![Vertex::Named("a\"b".into()), Vertex::Named("c".into())],
            labels: vec![],
            arrows: vec![Arrow {
                id: 0,
                source: 0,
                target: 1,
                label: ArrowLabel {
                    exponent: 0,
                    index: 1,
                },
            }],
            relations: None,
        };
        assert_eq!(
            to_dot(&q),
            "digraph quiver {\n  v0 [label=\"a\\\"b\"];\n  v1 [label=\"c\"];\n  v0 -> v1 [label=\"0,1\", id=\"a0\"];\n}\n"
        );
    }
}
