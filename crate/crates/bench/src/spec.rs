use std::path::PathBuf;
use std::time::Duration;

use paperplan::planner::Strategy;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SpecError {
    #[error("invalid list {0:?}: use items like 3, 1-4 or 1..4 separated by commas")]
    BadList(String),
    #[error("a run needs at least one {0}")]
    Empty(&'static str),
    #[error("class {0} is outside 1..=24")]
    BadClass(u32),
}

/// Everything a sweep needs. Seeds run from 0 to `seeds - 1` in every class.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub classes: Vec<u32>,
    pub seeds: u64,
    pub periods: usize,
    pub subperiods: usize,
    pub strategies: Vec<Strategy>,
    pub time_limit: Duration,
    pub out_dir: PathBuf,
    pub jobs: usize,
}

impl RunSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.classes.is_empty() {
            return Err(SpecError::Empty("class"));
        }
        if let Some(&c) = self.classes.iter().find(|&&c| c == 0 || c > paperplan::instances::CLASS_COUNT) {
            return Err(SpecError::BadClass(c));
        }
        if self.seeds == 0 {
            return Err(SpecError::Empty("seed"));
        }
        if self.strategies.is_empty() {
            return Err(SpecError::Empty("strategy"));
        }
        if self.periods == 0 || self.subperiods == 0 {
            return Err(SpecError::Empty("period and sub-period"));
        }
        Ok(())
    }
}

/// Parses `"1-3,7"` or `"1..3"` into a sorted, de-duplicated id list.
pub fn parse_id_list(text: &str) -> Result<Vec<u32>, SpecError> {
    let bad = || SpecError::BadList(text.to_string());
    let mut ids = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let range = part.split_once("..").or_else(|| part.split_once('-'));
        match range {
            Some((a, b)) => {
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                ids.extend(a..=b);
            }
            None => ids.push(part.parse().map_err(|_| bad())?),
        }
    }
    if ids.is_empty() {
        return Err(bad());
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_id_list("1-3,7").unwrap(), vec![1, 2, 3, 7]);
        assert_eq!(parse_id_list("1..=3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_id_list("5, 2, 5").unwrap(), vec![2, 5]);
        assert!(parse_id_list("3-1").is_err());
        assert!(parse_id_list("x").is_err());
        assert!(parse_id_list("").is_err());
    }
}
