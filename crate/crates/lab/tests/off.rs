use isobound::off::{parse_off, read_off, to_off, write_off};
use isobound_core::mesh3d::{ellipsoid_mesh, icosphere, mesh_summary};

#[test]
fn generated_meshes_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for (i, m) in [icosphere(0, 1.0), icosphere(3, 2.5), ellipsoid_mesh(1.2, 1.0, 0.7, 2)].into_iter().enumerate() {
        let m = m.unwrap();
        assert_eq!(parse_off(&to_off(&m)).unwrap(), m);
        let path = dir.path().join(format!("m{i}.off"));
        write_off(&m, &path).unwrap();
        let back = read_off(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(mesh_summary(&back).unwrap(), mesh_summary(&m).unwrap());
    }
}

#[test]
fn header_carries_vertex_face_edge_counts() {
    let m = icosphere(1, 1.0).unwrap();
    let text = to_off(&m);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("42 80 120"));
}

#[test]
fn open_or_inverted_surfaces_are_rejected() {
    let open = "OFF\n4 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n";
    assert!(parse_off(open).is_err());
    let inverted = "OFF\n4 4 6\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";
    assert!(parse_off(inverted).is_err());
}
