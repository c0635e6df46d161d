use std::sync::Arc;

use ndarray::Array2;
use otlab_core::instance::{random_space, uniform_on_random_subset};
use otlab_core::rng::seeded;
use otlab_core::{euclidean_space, DiscreteMeasure, FiniteMetricSpace, SpaceKind};

use crate::error::CliError;
use crate::instance::InstanceFile;
use crate::report::write_file;
use crate::{GenArgs, Kind, WeightMode};

const NAMES: [&str; 3] = ["lambda", "mu", "nu"];

pub fn run(args: &GenArgs) -> Result<bool, CliError> {
    let file = build(args)?;
    let text = file.to_toml()?;
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

/// The instance `gen` would write.
pub fn build(args: &GenArgs) -> Result<InstanceFile, CliError> {
    if args.kind == Kind::DiracTriple {
        return dirac_triple(&args.coords);
    }
    if args.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let (kind, name) = match args.kind {
        Kind::Euclidean => (SpaceKind::Euclidean { dim: args.k }, "euclidean"),
        _ => (SpaceKind::RandomMetric, "random-metric"),
    };
    let space = Arc::new(random_space(kind, args.n, args.seed)?);
    let mut file = InstanceFile::from_space(&space, name, Some(args.seed));
    let mut rng = seeded(args.seed ^ 0x6d65_6173_7572_6573);
    for name in NAMES {
        let m = match args.weights {
            WeightMode::Random => DiscreteMeasure::random(space.clone(), &mut rng, 0.2)?,
            WeightMode::Uniform => uniform_on_random_subset(space.clone(), (args.n / 2).max(1), &mut rng)?,
        };
        file.push_measure(name, &m);
    }
    Ok(file)
}

fn dirac_triple(coords: &[f64]) -> Result<InstanceFile, CliError> {
    if coords.len() != 3 {
        return Err(CliError::Input(format!("dirac-triple needs 3 coordinates, got {}", coords.len())));
    }
    let coords = Array2::from_shape_vec((3, 1), coords.to_vec()).expect("three rows");
    let space: Arc<FiniteMetricSpace> = Arc::new(euclidean_space(coords)?);
    let mut file = InstanceFile::from_space(&space, "dirac-triple", None);
    for (i, name) in NAMES.iter().enumerate() {
        file.push_measure(name, &DiscreteMeasure::dirac(space.clone(), i)?);
    }
    Ok(file)
}
