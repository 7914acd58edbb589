//! External interface contracts: instance and family JSON schemas,
//! outcome serialization, profile CSV, and the f32 instantiation of the
//! scalar-generic core.

use vcg_lab::integrals::RankProfile;
use vcg_lab::matroid::{greedy_min_basis, GraphicMatroidSpec, Matroid, UniformMatroidSpec};
use vcg_lab::set_system::{min_structure, StructureFamily};
use vcg_lab::vcg::{run_auction, Instance, System, SystemSpec};
use vcg_lab::{ExtCost, Instance32, Instance64};

fn k3_matroid() -> Matroid {
    Matroid::graphic(GraphicMatroidSpec {
        vertex_count: 3,
        edges: vec![(0, 1), (0, 2), (1, 2)],
    })
    .unwrap()
}

#[test]
fn instance_json_schema_is_stable() {
    let text = r#"{
        "system": {"kind": "uniform", "n": 4, "k": 2},
        "costs": [0.1, 0.2, 0.3, 0.4]
    }"#;
    let inst: Instance64 = Instance::from_json(text).unwrap();
    assert_eq!(inst.ground_size(), 4);
    let out = run_auction(&inst).unwrap();
    assert_eq!(out.min_structure, vec![0, 1]);
    assert!((out.vcg_total.finite().unwrap() - 0.6).abs() < 1e-12);

    let graphic = r#"{
        "system": {"kind": "graphic", "vertex_count": 3, "edges": [[0,1],[0,2],[1,2]]},
        "costs": [0.2, 0.5, 0.7]
    }"#;
    let inst: Instance64 = Instance::from_json(graphic).unwrap();
    assert!((run_auction(&inst).unwrap().nominal_cost - 0.7).abs() < 1e-12);

    let family = r#"{
        "system": {"kind": "family", "ground_size": 3, "structures": [[0],[1,2]]},
        "costs": [0.5, 0.2, 0.2]
    }"#;
    let inst: Instance64 = Instance::from_json(family).unwrap();
    assert!((run_auction(&inst).unwrap().vcg_total.finite().unwrap() - 0.6).abs() < 1e-12);
}

#[test]
fn outcome_serializes_all_per_item_arrays() {
    let inst = Instance::new(
        System::Matroid(k3_matroid()),
        vec![0.2f64, 0.5, 0.7],
    )
    .unwrap();
    let out = run_auction(&inst).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&serde_json::to_string(&out).unwrap()).unwrap();
    for field in ["min_structure", "threshold", "payment", "incentive", "bridges"] {
        assert!(doc[field].is_array(), "{field} missing");
    }
    assert_eq!(doc["threshold"].as_array().unwrap().len(), 3);
    assert!(doc["nominal_cost"].is_number());
    assert!(doc["vcg_total"].is_number());
}

#[test]
fn infinite_values_serialize_as_inf() {
    let tree = Matroid::graphic(GraphicMatroidSpec::path(3).unwrap()).unwrap();
    let inst = Instance::new(System::Matroid(tree), vec![0.3f64, 0.4]).unwrap();
    let out = run_auction(&inst).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&serde_json::to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["vcg_total"], serde_json::json!("inf"));
    assert_eq!(doc["threshold"][0], serde_json::json!("inf"));
    assert_eq!(doc["bridges"], serde_json::json!([0, 1]));
}

#[test]
fn system_spec_round_trips_through_json() {
    let specs = vec![
        SystemSpec::Uniform(UniformMatroidSpec { n: 5, k: 2 }),
        SystemSpec::Graphic(GraphicMatroidSpec::cycle(4).unwrap()),
        SystemSpec::Family(StructureFamily::k3_path()),
    ];
    for spec in specs {
        let text = serde_json::to_string(&spec).unwrap();
        let back: SystemSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert!(back.build().is_ok());
    }
    // custom rank oracles cannot be serialized
    let custom = System::Matroid(Matroid::custom(3, std::sync::Arc::new(|s: &[usize]| s.len())));
    assert!(serde_json::to_string(&custom).is_err());
}

#[test]
fn profile_csv_has_the_documented_schema() {
    let m = k3_matroid();
    let p = RankProfile::build(&m, &[0.2f64, 0.5, 0.7]).unwrap();
    let csv = p.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines,
        vec![
            "t_lo,t_hi,rank,bridges",
            "0,0.2,0,0",
            "0.2,0.5,1,1",
            "0.5,0.7,2,2",
            "0.7,inf,2,0",
        ]
    );
}

#[test]
fn edge_list_text_format_builds_the_same_matroid() {
    let spec = GraphicMatroidSpec::parse_edge_list("0 1\n0 2\n1 2\n").unwrap();
    let m = Matroid::graphic(spec).unwrap();
    let direct = k3_matroid();
    let costs = [0.2f64, 0.5, 0.7];
    assert_eq!(
        greedy_min_basis(&m, &costs).unwrap(),
        greedy_min_basis(&direct, &costs).unwrap()
    );
}

#[test]
fn family_json_matches_spec_fields() {
    let text = r#"{"ground_size": 3, "structures": [[0], [1, 2]]}"#;
    let family: StructureFamily = serde_json::from_str(text).unwrap();
    assert_eq!(family, StructureFamily::k3_path());
    let (s, c) = min_structure(&family, &[0.3f64, 0.1, 0.1], &[], &[])
        .unwrap()
        .unwrap();
    assert_eq!(s, vec![1, 2]);
    assert!((c - 0.2).abs() < 1e-12);
}

#[test]
fn f32_instantiation_reproduces_the_k3_fixture() {
    // the scalar-generic core works at single precision too
    let inst: Instance32 = Instance::new(
        System::Matroid(k3_matroid()),
        vec![0.2f32, 0.5, 0.7],
    )
    .unwrap();
    let out = run_auction(&inst).unwrap();
    assert_eq!(out.min_structure, vec![0, 1]);
    assert!((out.nominal_cost - 0.7f32).abs() < 1e-6);
    assert!((out.vcg_total.finite().unwrap() - 1.4f32).abs() < 1e-6);
    assert_eq!(out.payment[2], ExtCost::Finite(0.0f32));

    let m = k3_matroid();
    let p = RankProfile::build_fast(&m, &[0.2f32, 0.5, 0.7]).unwrap();
    assert!((p.nominal_cost_integral() - 0.7f32).abs() < 1e-6);
    assert!((p.sum_of_squares_integral() - 0.29f32).abs() < 1e-6);
}

#[test]
fn f32_sampling_and_estimation_work() {
    use vcg_lab::mc::{estimate, Template};
    use vcg_lab::sampling::{CostModel, Dist};
    let m = Matroid::uniform(UniformMatroidSpec { n: 4, k: 2 }).unwrap();
    let model = CostModel::iid(4, Dist::Uniform { upper: 1.0f32 }).unwrap();
    let tpl = Template::new(System::Matroid(m), model).unwrap();
    let rep = estimate(&tpl, 20_000, 5).unwrap();
    assert!((rep.mean_cstar.value - 0.6).abs() < 5.0 * rep.mean_cstar.se + 1e-4);
    assert!((rep.mean_vcg.value - 1.2).abs() < 5.0 * rep.mean_vcg.se + 1e-4);
}
