use gmml_cli::config::{Block, Matrix, OrderStatSpec};
use gmml_cli::{Model, ModelConfig, ModelKind};
use gmml_core::models::FigureName;
use std::path::Path;

fn matrix(rows: usize, cols: usize, data: &[f64]) -> Matrix {
    Matrix { rows, cols, data: data.to_vec() }
}

fn samples() -> Vec<ModelConfig> {
    let base = ModelConfig::figure(FigureName::Fig1);
    let mut out = vec![base.clone()];
    out.push(ModelConfig {
        kind: ModelKind::PowerFfGmml,
        alphas: Some(vec![0.6, 0.7]),
        nu: Some(vec![5.0, 30.0 / 7.0]),
        pi: Some(vec![1.0 / 3.0; 3]),
        figure_name: None,
        blocks: vec![
            Block { c: matrix(3, 3, &[-10.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -0.1]), d: matrix(3, 1, &[10.0, 1.0, 0.1]) },
            Block { c: matrix(1, 1, &[-0.3]), d: matrix(1, 1, &[0.3]) },
        ],
        ..base.clone()
    });
    out.push(ModelConfig {
        kind: ModelKind::Orderstat,
        figure_name: None,
        orderstat: Some(OrderStatSpec { m: 3, lambda: 1.0, mu: 0.1 + 0.2, coupling: None, p: Some(matrix(3, 3, &[0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 1.0])) }),
        ..base.clone()
    });
    out.push(ModelConfig {
        kind: ModelKind::Gmml,
        alphas: Some(vec![0.55, 1.0]),
        pi: Some(vec![0.25, 0.75]),
        t: Some(matrix(2, 2, &[-1.0 / 3.0, 1e-17, 0.0, -2.0])),
        r: Some(matrix(2, 2, &[1.0, 0.0, 2.5, 1.0])),
        figure_name: None,
        ..base
    });
    out
}

#[test]
fn configs_round_trip() {
    for cfg in samples() {
        let text = cfg.to_toml();
        let back = ModelConfig::parse(&text).unwrap();
        assert_eq!(back, cfg, "{text}");
        for (a, b) in back.blocks.iter().zip(&cfg.blocks) {
            let bits = |m: &Matrix| m.data.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&a.c), bits(&b.c));
        }
        if let Err(e) = cfg.resolve() {
            panic!("{e}\n{text}");
        }
    }
}

#[test]
fn shipped_configs_resolve() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ModelConfig::load(&path).unwrap();
        let back = ModelConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        let name = path.file_name().unwrap().to_str().unwrap();
        match cfg.resolve() {
            Ok(m) => assert!(m.dim() >= 1),
            Err(e) => assert!(name.starts_with("bad_") && e.exit_code() == 3, "{name}: {e}"),
        }
    }
    assert!(matches!(ModelConfig::figure(FigureName::Fig3).resolve().unwrap(), Model::Figure(_)));
}
