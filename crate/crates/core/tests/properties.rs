mod common;

#[test]
fn h_projector() {
    common::h_projector().unwrap();
}

#[test]
fn omega_symmetry_residues() {
    common::omega_symmetry_residues().unwrap();
}

#[test]
fn phi_ladder() {
    common::phi_ladder().unwrap();
}

#[test]
fn mirror_map_leading() {
    common::mirror_map_leading().unwrap();
}

#[test]
fn string_equation() {
    common::string_equation().unwrap();
}

#[test]
fn character_orthogonality() {
    common::character_orthogonality().unwrap();
}

#[test]
fn disk_v_cancellation() {
    common::disk_v_cancellation().unwrap();
}
