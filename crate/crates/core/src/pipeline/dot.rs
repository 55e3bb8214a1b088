use std::collections::BTreeSet;
use std::fmt::Write;

use crate::blowup::Star;
use crate::kernel::Label;
use crate::manifold::MonomialManifold;

fn fmt_set(labels: &BTreeSet<Label>) -> String {
    let inner: Vec<&str> = labels.iter().map(Label::as_str).collect();
    format!("{{{}}}", inner.join(", "))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn write_body(out: &mut String, m: &MonomialManifold, prefix: &str, indent: &str) {
    for c in m.corners() {
        let _ = writeln!(
            out,
            "{indent}\"{prefix}{}\" [label=\"{}\\n{}\"];",
            escape(c.id.as_str()),
            escape(c.id.as_str()),
            escape(&fmt_set(&c.index_set))
        );
    }
    for e in m.edges() {
        let _ = writeln!(
            out,
            "{indent}\"{prefix}{}\" -- \"{prefix}{}\" [label=\"{}\"];",
            escape(e.from.as_str()),
            escape(e.to.as_str()),
            escape(&fmt_set(&e.shared))
        );
    }
}

/// The corner-adjacency graph: one node per corner labelled with its index
/// set, one edge per compact edge labelled with the shared labels.
pub fn export_manifold_dot(m: &MonomialManifold) -> String {
    let mut out = String::from("graph manifold {\n  node [shape=box];\n");
    write_body(&mut out, m, "", "  ");
    out.push_str("}\n");
    out
}

/// One cluster for the root and one per blow-up, each holding the manifold
/// at that stage.
pub fn export_star_dot(star: &Star) -> String {
    let mut out = String::from("graph star {\n  node [shape=box];\n");
    let stages = std::iter::once((String::from("root"), star.root())).chain(star.steps().iter().enumerate().map(|(k, s)| {
        let (i, j) = s.center.pair();
        (format!("step {}: center {{{i}, {j}}}, new {}", k + 1, s.new_label), &s.after)
    }));
    for (k, (title, m)) in stages.enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{k} {{\n    label=\"{}\";", escape(&title));
        write_body(&mut out, m, &format!("s{k}_"), "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_is_a_single_node() {
        let m = MonomialManifold::make_corner(2, [Label::from("E1"), Label::from("E2")]).unwrap();
        let dot = export_manifold_dot(&m);
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(dot.contains("{E1, E2}"));
        assert!(!dot.contains("--"));
    }
}
