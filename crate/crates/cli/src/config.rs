//! Run configuration: command line flags, then `HITCALC_*` variables (both through
//! clap), then an optional `key=value` file, then defaults.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use hitcalc::quotient::{BuildOptions, Strategy, DEFAULT_MAX_SPACE};
use hitcalc::steenrod::GeneratorMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Direct,
    Recursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorsArg {
    PowersOfTwo,
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub format: Format,
    pub strategy: Strategy,
    pub generators: GeneratorMode,
    pub prefilter: bool,
    pub max_space: u128,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn build_options(&self) -> BuildOptions {
        BuildOptions {
            generators: self.generators,
            prefilter: self.prefilter,
            max_space: self.max_space,
            track: false,
        }
    }
}

/// Flag values as given; `None` where neither the flag nor its variable was set.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub format: Option<Format>,
    pub strategy: Option<StrategyArg>,
    pub generators: Option<GeneratorsArg>,
    pub prefilter: Option<bool>,
    pub max_space: Option<u128>,
    pub threads: Option<usize>,
}

const KEYS: [&str; 6] = ["format", "strategy", "generators", "prefilter", "max-space", "threads"];

pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value", n + 1);
        };
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key {key:?}", n + 1);
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

fn from_file<T: ValueEnum>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| T::from_str(v, true).map_err(|e| anyhow::anyhow!("config {key}: {e}")))
        .transpose()
}

fn parse_value<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|e| anyhow::anyhow!("config {key}: {e}")))
        .transpose()
}

pub fn resolve(flags: &Overrides, file: Option<&Path>) -> Result<RunConfig> {
    let map = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let format = flags.format.or(from_file(&map, "format")?).unwrap_or(Format::Text);
    let strategy = match flags.strategy.or(from_file(&map, "strategy")?) {
        Some(StrategyArg::Recursive) => Strategy::Recursive,
        _ => Strategy::Direct,
    };
    let generators = match flags.generators.or(from_file(&map, "generators")?) {
        Some(GeneratorsArg::All) => GeneratorMode::All,
        _ => GeneratorMode::PowersOfTwo,
    };
    let prefilter = flags.prefilter.or(parse_value(&map, "prefilter")?).unwrap_or(false);
    let max_space = flags.max_space.or(parse_value(&map, "max-space")?).unwrap_or(DEFAULT_MAX_SPACE);
    if max_space == 0 {
        bail!("max-space must be positive");
    }
    let threads = flags.threads.or(parse_value(&map, "threads")?);
    if threads == Some(0) {
        bail!("threads must be positive");
    }
    Ok(RunConfig {
        format,
        strategy,
        generators,
        prefilter,
        max_space,
        threads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_fill_gaps() {
        let map = parse_file("# run\nformat = json\nmax_space=1000\n\nthreads=2\n").unwrap();
        assert_eq!(map.len(), 3);
        assert!(parse_file("colour=red").is_err());
        assert!(parse_file("format json").is_err());
        let dir = std::env::temp_dir().join(format!("hitcalc-config-{}", std::process::id()));
        std::fs::write(&dir, "format=csv\nstrategy=recursive\nprefilter=true\n").unwrap();
        let flags = Overrides {
            format: Some(Format::Json),
            ..Overrides::default()
        };
        let c = resolve(&flags, Some(&dir)).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.strategy, Strategy::Recursive);
        assert!(c.prefilter);
        assert_eq!(c.max_space, DEFAULT_MAX_SPACE);
    }
}
