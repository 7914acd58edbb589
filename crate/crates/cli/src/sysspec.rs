//! Parsing of the `--system` and `--dist` command-line specs.

use std::fs;

use anyhow::{bail, Context};
use vcg_lab::matroid::{GraphicMatroidSpec, Matroid, UniformMatroidSpec};
use vcg_lab::sampling::Dist;
use vcg_lab::set_system::StructureFamily;
use vcg_lab::vcg::System;

/// Accepted forms:
/// `uniform:N,K`, `graphic:k3|kN|cN|tree|treeN`, `graphic:PATH`
/// (edge-list file, one `u v` per line), `complete:N`, `k3path`,
/// `family:PATH` (JSON with `ground_size` and `structures`).
pub fn parse_system(spec: &str) -> anyhow::Result<System> {
    if let Some(rest) = spec.strip_prefix("uniform:") {
        let (n, k) = rest
            .split_once(',')
            .with_context(|| format!("expected uniform:N,K, got {spec:?}"))?;
        let n: usize = n.trim().parse().context("uniform: N must be an integer")?;
        let k: usize = k.trim().parse().context("uniform: K must be an integer")?;
        return Ok(System::Matroid(Matroid::uniform(UniformMatroidSpec { n, k })?));
    }
    if spec == "k3path" {
        return Ok(System::Family(StructureFamily::k3_path()));
    }
    if let Some(path) = spec.strip_prefix("family:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let family: StructureFamily =
            serde_json::from_str(&text).with_context(|| format!("parsing family JSON {path}"))?;
        return Ok(System::Family(family));
    }
    if let Some(rest) = spec.strip_prefix("complete:") {
        let n: usize = rest.trim().parse().context("complete: N must be an integer")?;
        return Ok(System::Matroid(Matroid::graphic(GraphicMatroidSpec::complete(n)?)?));
    }
    if let Some(rest) = spec.strip_prefix("graphic:") {
        let graph = parse_graph(rest)?;
        return Ok(System::Matroid(Matroid::graphic(graph)?));
    }
    bail!(
        "unrecognized system {spec:?}; expected uniform:N,K | graphic:<name-or-file> | complete:N | k3path | family:PATH"
    )
}

fn parse_graph(name: &str) -> anyhow::Result<GraphicMatroidSpec> {
    if name == "tree" {
        return Ok(GraphicMatroidSpec::path(3)?);
    }
    if let Some(n) = name.strip_prefix('k').and_then(|s| s.parse::<usize>().ok()) {
        return Ok(GraphicMatroidSpec::complete(n)?);
    }
    if let Some(n) = name.strip_prefix('c').and_then(|s| s.parse::<usize>().ok()) {
        return Ok(GraphicMatroidSpec::cycle(n)?);
    }
    if let Some(n) = name.strip_prefix("tree").and_then(|s| s.parse::<usize>().ok()) {
        return Ok(GraphicMatroidSpec::path(n)?);
    }
    let text = fs::read_to_string(name)
        .with_context(|| format!("graph {name:?} is not a named graph and not a readable file"))?;
    Ok(GraphicMatroidSpec::parse_edge_list(&text)?)
}

/// Accepted forms: `uniform`, `exp`, `beta`, each optionally with an
/// inline parameter (`beta:2`). An explicit `--param` takes precedence.
/// The parameter means the upper end for uniform, the rate for
/// exponential, and alpha for Beta(alpha,1); it defaults to 1.
pub fn parse_dist(spec: &str, param: Option<f64>) -> anyhow::Result<Dist<f64>> {
    let (name, inline) = match spec.split_once(':') {
        Some((n, p)) => {
            let v: f64 = p
                .parse()
                .with_context(|| format!("distribution parameter {p:?} is not a number"))?;
            (n, Some(v))
        }
        None => (spec, None),
    };
    let p = param.or(inline).unwrap_or(1.0);
    let dist = match name {
        "uniform" => Dist::Uniform { upper: p },
        "exp" | "exponential" => Dist::Exponential { rate: p },
        "beta" => Dist::Beta { alpha: p },
        other => bail!("unrecognized distribution {other:?}; expected uniform | exp | beta"),
    };
    dist.validate()?;
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_systems() {
        assert!(matches!(parse_system("uniform:4,2").unwrap(), System::Matroid(_)));
        let k3 = parse_system("graphic:k3").unwrap();
        assert_eq!(k3.ground_size(), 3);
        let c5 = parse_system("graphic:c5").unwrap();
        assert_eq!(c5.ground_size(), 5);
        let tree = parse_system("graphic:tree4").unwrap();
        assert_eq!(tree.ground_size(), 3);
        assert_eq!(parse_system("complete:5").unwrap().ground_size(), 10);
        assert!(matches!(parse_system("k3path").unwrap(), System::Family(_)));
        assert!(parse_system("uniform:4").is_err());
        assert!(parse_system("nope").is_err());
    }

    #[test]
    fn parses_distributions() {
        assert_eq!(parse_dist("uniform", None).unwrap(), Dist::Uniform { upper: 1.0 });
        assert_eq!(parse_dist("beta:2", None).unwrap(), Dist::Beta { alpha: 2.0 });
        assert_eq!(
            parse_dist("beta:2", Some(0.5)).unwrap(),
            Dist::Beta { alpha: 0.5 }
        );
        assert_eq!(
            parse_dist("exp", Some(3.0)).unwrap(),
            Dist::Exponential { rate: 3.0 }
        );
        assert!(parse_dist("beta:0", None).is_err());
        assert!(parse_dist("gauss", None).is_err());
    }
}
