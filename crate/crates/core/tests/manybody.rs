use monopole_corners::manybody::{diagonal_label, diagonal_structure, ManyBodyStructure};
use monopole_corners::partitions::{all_chains_below, all_partitions, join, refines};
use monopole_corners::SetPartition;

#[test]
fn containment_is_reverse_refinement() {
    for k in 2..=5 {
        let ws = diagonal_structure(k, 3).unwrap();
        let all = all_partitions(k).unwrap();
        for a in &all {
            for b in &all {
                // D_a ⊆ D_b iff b refines a.
                let contained = ws.is_contained(&diagonal_label(a), &diagonal_label(b)).unwrap();
                assert_eq!(contained, refines(b, a).unwrap(), "k={k} {a} {b}");
            }
        }
    }
}

#[test]
fn meets_are_joins() {
    for k in 2..=5 {
        let ws = diagonal_structure(k, 3).unwrap();
        assert!(ws.validate().is_empty());
        let all = all_partitions(k).unwrap();
        for a in &all {
            for b in &all {
                let m = ws.meet(&diagonal_label(a), &diagonal_label(b)).unwrap().unwrap().to_string();
                assert_eq!(m, diagonal_label(&join(a, b).unwrap()));
            }
        }
    }
}

#[test]
fn hypersurfaces_are_nonzero_elements() {
    let bell = [1usize, 1, 2, 5, 15, 52];
    for k in 2..=5 {
        let ws = diagonal_structure(k, 3).unwrap();
        assert_eq!(ws.hypersurfaces().len(), bell[k] - 1);
        assert_eq!(ws.zero().unwrap().label, diagonal_label(&SetPartition::one_block(k)));
        assert_eq!(ws.top().unwrap().dim, 3 * (k - 1));
    }
}

#[test]
fn corner_dimensions() {
    for k in 2..=4 {
        let ws = diagonal_structure(k, 3).unwrap();
        let top = SetPartition::one_block(k);
        for d in 1..k {
            for chain in all_chains_below(&top, d).unwrap() {
                let labels: Vec<String> = chain.entries().iter().map(diagonal_label).collect();
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                let face = ws.face_of_chain(&refs).unwrap();
                assert_eq!(face.total_dim(), ws.ambient_dim() - d);
                assert_eq!(face.codim(), d);
            }
        }
    }
}

#[test]
fn json_round_trip_and_fault_detection() {
    let ws = diagonal_structure(3, 3).unwrap();
    let text = serde_json::to_string(&ws).unwrap();
    let back: ManyBodyStructure = serde_json::from_str(&text).unwrap();
    assert_eq!(back, ws);

    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["elements"][0]["dim"] = serde_json::json!(5);
    let broken: ManyBodyStructure = serde_json::from_value(value).unwrap();
    assert!(!broken.validate().is_empty());
}
