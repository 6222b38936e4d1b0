use std::fmt::Write;

use super::FiniteFrame;

/// Renders a Hasse diagram in Graphviz DOT with nodes in enumeration order.
pub fn hasse_dot(name: &str, labels: &[String], covers: &[(usize, usize)], order: &[usize]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
    out.push_str("  rankdir=BT;\n");
    for &i in order {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(&labels[i]));
    }
    let mut edges = covers.to_vec();
    edges.sort_by_key(|&(a, b)| {
        let pos = |x| order.iter().position(|&y| y == x).unwrap_or(usize::MAX);
        (pos(a), pos(b))
    });
    for (a, b) in edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl FiniteFrame {
    pub fn to_dot(&self) -> String {
        hasse_dot(self.name(), self.element_names(), &self.covers(), self.enumeration())
    }
}
