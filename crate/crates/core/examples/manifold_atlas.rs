//! Builds a small atlas by hand, checks it, then corrupts an edge and lists
//! the violations found.

use monores::kernel::{CornerId, ExponentMatrix, Label};
use monores::manifold::{Corner, MonomialManifold};

fn main() -> monores::Result<()> {
    let labels = |ls: &[&str]| ls.iter().map(|s| Label::from(*s)).collect();
    let corners = vec![
        Corner { id: CornerId::from("p"), index_set: labels(&["E1", "E3"]) },
        Corner { id: CornerId::from("q"), index_set: labels(&["E2", "E3"]) },
    ];
    let edge = ExponentMatrix::parse(&["E2", "E3"], &["E1", "E3"], &[&["-1", "0"], &["2", "1"]])?;
    let m = MonomialManifold::from_parts(
        2,
        labels(&["E1", "E2", "E3"]),
        corners,
        vec![(CornerId::from("p"), CornerId::from("q"), edge)],
    )?;
    println!("{} corners, {} edges, {} violations", m.corner_count(), m.edge_count(), m.validate().len());
    println!("γ^(pq) = {}", m.weight_connexion(&CornerId::from("p"), &CornerId::from("q"))?);
    println!("{}", serde_json::to_string_pretty(&m.to_json()).expect("serializable"));

    let bad = ExponentMatrix::parse(&["E2", "E3"], &["E1", "E3"], &[&["-1", "1"], &["2", "1"]])?;
    let corrupt = m.replace_edge_matrix(&CornerId::from("p"), &CornerId::from("q"), bad)?;
    for v in corrupt.validate() {
        println!("violation: {v}");
    }
    Ok(())
}
