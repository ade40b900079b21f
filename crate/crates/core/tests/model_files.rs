use kg_core::models::{self, ModelFile, SquareWellParams};
use kg_core::operator::ModelSpec;
use kg_core::{Error, SymmetricMatrix};

#[test]
fn save_and_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("well.json");
    let spec = models::square_well_model(&SquareWellParams::new(1.0 / 3.0)).unwrap();
    models::save_model(&spec, &path).unwrap();
    let back = models::load_model(&path).unwrap();
    assert_eq!(back.u_squared(), spec.u_squared());
    assert_eq!(back.v(), spec.v());
    assert_eq!(back.label, spec.label);
}

#[test]
fn parametric_files() {
    let well = models::parse_model(r#"{"model": "square_well", "tau": 1.7, "eta": 0.1}"#).unwrap();
    assert_eq!(well, ModelFile::SquareWell(SquareWellParams { tau: 1.7, eta: Some(0.1) }));
    let harmonic = models::parse_model(r#"{"model": "harmonic", "alpha": 0.3, "grid_points": 50}"#).unwrap();
    let spec = harmonic.build().unwrap();
    assert_eq!(spec.order(), 50);
}

#[test]
fn rejected_files() {
    let unknown_field = models::parse_model(r#"{"model": "square_well", "tau": 1, "mass": 2}"#).unwrap_err();
    assert!(matches!(unknown_field, Error::Parse { .. }));
    let unknown_kind = models::parse_model(r#"{"model": "coulomb"}"#).unwrap_err();
    assert!(matches!(unknown_kind, Error::Parse { .. }));
    let ragged = models::parse_model(r#"{"u_squared": [[1, 0], [0]], "v": [[0, 0], [0, 0]]}"#).unwrap_err();
    assert_eq!(ragged.exit_code(), 3);
    let asymmetric = models::parse_model(r#"{"u_squared": [[2, 1], [0, 2]], "v": [[0, 0], [0, 0]]}"#).unwrap_err();
    assert!(matches!(asymmetric, Error::Validation(_)));
    let mismatched = models::parse_model(r#"{"u_squared": [[2]], "v": [[0, 0], [0, 0]]}"#).unwrap_err();
    assert_eq!(mismatched.exit_code(), 3);
    let missing = models::load_model("/nonexistent/model.json").unwrap_err();
    assert!(matches!(missing, Error::Io { .. }));
}

#[test]
fn explicit_model_matches_constructor() {
    let parsed = models::parse_model(r#"{"label": "d", "u_squared": [[4, 0], [0, 9]], "v": [[1, 0], [0, 0]]}"#)
        .unwrap()
        .build()
        .unwrap();
    let direct = ModelSpec::new(
        SymmetricMatrix::from_diagonal(&[4.0, 9.0]),
        SymmetricMatrix::from_diagonal(&[1.0, 0.0]),
        "d",
    )
    .unwrap();
    assert_eq!(parsed, direct);
}
