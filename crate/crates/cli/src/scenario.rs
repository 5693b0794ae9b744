//! Scenario files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! # base case
//! p   = 10
//! c   = 4
//! c_o = 4
//! k   = 1
//! M   = 7
//! ```
//!
//! Model keys are `p`, `c`, `c_o`, `k`, `M` (required) and `v` (defaults to
//! `p + c_o + M`). The verification grid can be tuned with `q_max`,
//! `q_steps` and `mu_steps`. Anything else is rejected.

use bops_core::oracle::GridSpec;
use bops_core::ModelParams;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
}

/// Optional replacements for the default verification grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridOverrides {
    pub q_max: Option<f64>,
    pub q_steps: Option<usize>,
    pub mu_steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub params: ModelParams,
    pub grid: GridOverrides,
}

impl Scenario {
    pub fn new(params: ModelParams) -> Self {
        Self { params, grid: GridOverrides::default() }
    }

    pub fn grid_spec(&self) -> GridSpec {
        let default = GridSpec::default_for(&self.params);
        GridSpec {
            q_max: self.grid.q_max.unwrap_or(default.q_max),
            q_steps: self.grid.q_steps.unwrap_or(default.q_steps),
            mu_steps: self.grid.mu_steps.unwrap_or(default.mu_steps),
        }
    }
}

const MODEL_KEYS: [&str; 6] = ["p", "c", "c_o", "k", "M", "v"];
const GRID_KEYS: [&str; 3] = ["q_max", "q_steps", "mu_steps"];

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut model: [Option<f64>; 6] = [None; 6];
    let mut grid = GridOverrides::default();
    let mut seen_grid = [false; 3];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| ScenarioError::Parse { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());

        if let Some(slot) = MODEL_KEYS.iter().position(|k| *k == key) {
            if model[slot].is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
            let number: f64 = value
                .parse()
                .map_err(|_| err(format!("`{key}` needs a number, got `{value}`")))?;
            model[slot] = Some(number);
        } else if let Some(slot) = GRID_KEYS.iter().position(|k| *k == key) {
            if std::mem::replace(&mut seen_grid[slot], true) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            match key {
                "q_max" => {
                    grid.q_max = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("`q_max` needs a number, got `{value}`")))?,
                    )
                }
                _ => {
                    let steps: usize = value
                        .parse()
                        .map_err(|_| err(format!("`{key}` needs a whole number, got `{value}`")))?;
                    if key == "q_steps" {
                        grid.q_steps = Some(steps);
                    } else {
                        grid.mu_steps = Some(steps);
                    }
                }
            }
        } else {
            return Err(err(format!("unknown key `{key}`")));
        }
    }

    let require = |slot: usize| {
        model[slot].ok_or_else(|| ScenarioError::Validation(format!("missing key `{}`", MODEL_KEYS[slot])))
    };
    let params = ModelParams::new(require(0)?, require(1)?, require(2)?, require(3)?, require(4)?, model[5])
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;

    let scenario = Scenario { params, grid };
    scenario
        .grid_spec()
        .validate()
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    Ok(scenario)
}

/// Writes a scenario back out; `parse_scenario(&render(s)) == s`.
pub fn render(scenario: &Scenario) -> String {
    let p = &scenario.params;
    let mut out = format!(
        "p = {}\nc = {}\nc_o = {}\nk = {}\nM = {}\nv = {}\n",
        p.price, p.unit_cost, p.delivery_fee, p.effort_cost, p.max_wait, p.valuation
    );
    if let Some(q_max) = scenario.grid.q_max {
        out.push_str(&format!("q_max = {q_max}\n"));
    }
    if let Some(steps) = scenario.grid.q_steps {
        out.push_str(&format!("q_steps = {steps}\n"));
    }
    if let Some(steps) = scenario.grid.mu_steps {
        out.push_str(&format!("mu_steps = {steps}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_scenario() {
        let s = parse_scenario("p=10\nc=4\nc_o=4\nk=1\nM=7").unwrap();
        assert_eq!(s.params, ModelParams::new(10.0, 4.0, 4.0, 1.0, 7.0, Some(21.0)).unwrap());
        assert_eq!(s.grid, GridOverrides::default());
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "# header\n  p =10 # price\n\nc= 4\n\tc_o\t=\t4\nk = 1\nM = 7\nv = 30\nq_steps = 50\n";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.params.valuation, 30.0);
        assert_eq!(s.grid.q_steps, Some(50));
        assert_eq!(s.grid_spec().mu_steps, 400);
    }

    #[test]
    fn validation_errors_name_the_constraint() {
        let err = parse_scenario("p=10\nc=4\nc_o=4\nk=12\nM=7").unwrap_err();
        assert!(matches!(&err, ScenarioError::Validation(m) if m.contains("k must satisfy 0 ≤ k < p")), "{err}");
        let err = parse_scenario("p=10\nc=4\nc_o=8\nk=1\nM=7").unwrap_err();
        assert!(matches!(&err, ScenarioError::Validation(m) if m.contains("M must satisfy M > c_o")), "{err}");
        let err = parse_scenario("p=10\nc=4\nc_o=4\nk=1").unwrap_err();
        assert_eq!(err, ScenarioError::Validation("missing key `M`".into()));
        let err = parse_scenario("p=10\nc=4\nc_o=4\nk=1\nM=7\nq_steps=1").unwrap_err();
        assert!(matches!(err, ScenarioError::Validation(_)));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("p=10\nc=4\nbogus\n", 3),
            ("p=10\n# note\nprice=4\n", 3),
            ("p=ten\n", 1),
            ("p=10\np=11\n", 2),
            ("p=10\nq_steps=1.5\n", 2),
        ];
        for (text, line) in cases {
            match parse_scenario(text) {
                Err(ScenarioError::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    fn scenario_strategy() -> impl Strategy<Value = Scenario> {
        (
            0.5f64..6.0,
            0.1f64..6.0,
            1.0f64..20.0,
            0.05f64..0.95,
            0.0f64..0.99,
            0.0f64..5.0,
            proptest::option::of(0.5f64..20.0),
            proptest::option::of(2usize..1000),
            proptest::option::of(2usize..1000),
        )
            .prop_map(|(co, extra, p, cf, kf, margin, q_max, q_steps, mu_steps)| {
                let m = co + extra;
                let params = ModelParams::new(p, cf * p, co, kf * p, m, Some(p + co + m + margin)).unwrap();
                Scenario { params, grid: GridOverrides { q_max, q_steps, mu_steps } }
            })
    }

    proptest! {
        #[test]
        fn render_round_trips(s in scenario_strategy()) {
            prop_assert_eq!(parse_scenario(&render(&s)).unwrap(), s);
        }
    }
}
