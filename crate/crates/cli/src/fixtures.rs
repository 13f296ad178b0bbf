//! Scenario files for the published figures, compiled into the binary.

use crate::scenario::{parse_scenario, Scenario, ScenarioError};

pub const FIXTURES: [(&str, &str); 7] = [
    ("fig3a", include_str!("../fixtures/fig3a.toml")),
    ("fig3b", include_str!("../fixtures/fig3b.toml")),
    ("fig3c", include_str!("../fixtures/fig3c.toml")),
    ("fig4a", include_str!("../fixtures/fig4a.toml")),
    ("fig4b", include_str!("../fixtures/fig4b.toml")),
    ("fig4c", include_str!("../fixtures/fig4c.toml")),
    ("fig4d", include_str!("../fixtures/fig4d.toml")),
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn load_fixture(name: &str) -> Result<Scenario, ScenarioError> {
    let text = fixture_text(name).ok_or_else(|| {
        let known: Vec<&str> = FIXTURES.iter().map(|(n, _)| *n).collect();
        ScenarioError::Validation(vec![format!("unknown fixture `{name}`; known: {}", known.join(", "))])
    })?;
    parse_scenario(text)
}
