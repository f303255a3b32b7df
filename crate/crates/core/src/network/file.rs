use serde::{Deserialize, Serialize};

use super::{GeneralNetwork, NetworkError};
use crate::qstate::PmsParams;

/// On-disk network description (TOML).
///
/// ```toml
/// nodes = ["A", "x", "B"]      # optional; defaults to first-appearance order
/// terminals = ["A", "B"]       # optional
///
/// [[edges]]
/// from = "A"
/// to = "x"
/// alpha = 0.6
/// gamma = 0.0                  # optional, default 0
/// lambda = 0.9
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminals: Option<[String; 2]>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    pub alpha: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(alias = "lam")]
    pub lambda: f64,
}

impl NetworkFile {
    pub fn parse(text: &str) -> Result<Self, NetworkError> {
        toml::from_str(text).map_err(|e| NetworkError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, NetworkError> {
        toml::to_string(self).map_err(|e| NetworkError::Parse(e.to_string()))
    }

    pub fn into_network(self) -> Result<GeneralNetwork, NetworkError> {
        let mut net = GeneralNetwork::new();
        let declared = self.nodes.is_some();
        for name in self.nodes.iter().flatten() {
            net.add_node(name)?;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if !declared {
                net.ensure_node(&e.from);
                net.ensure_node(&e.to);
            }
            let params = PmsParams::new(e.alpha, e.gamma, e.lambda)
                .map_err(|err| NetworkError::Parse(format!("edge {i}: {err}")))?;
            net.add_edge(&e.from, &e.to, params)?;
        }
        if let Some([a, b]) = &self.terminals {
            net.set_terminals(a, b)?;
        }
        Ok(net)
    }

    pub fn from_network(net: &GeneralNetwork) -> Self {
        Self {
            nodes: Some(net.nodes().to_vec()),
            terminals: net.terminals().map(|(a, b)| [a.to_string(), b.to_string()]),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    from: net.node_name(e.u).to_string(),
                    to: net.node_name(e.v).to_string(),
                    alpha: e.params.alpha,
                    gamma: e.params.gamma,
                    lambda: e.params.lam,
                })
                .collect(),
        }
    }
}

impl GeneralNetwork {
    pub fn from_toml(text: &str) -> Result<Self, NetworkError> {
        NetworkFile::parse(text)?.into_network()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_implicit_nodes() {
        let net = GeneralNetwork::from_toml(
            r#"
            terminals = ["A", "B"]
            [[edges]]
            from = "A"
            to = "B"
            alpha = 0.5
            lambda = 0.9
            "#,
        )
        .unwrap();
        assert_eq!(net.nodes(), ["A", "B"]);
        assert_eq!(net.edges()[0].params.gamma, 0.0);
        assert_eq!(net.terminals(), Some(("A", "B")));
    }

    #[test]
    fn declared_nodes_are_enforced() {
        let err = GeneralNetwork::from_toml(
            r#"
            nodes = ["A"]
            [[edges]]
            from = "A"
            to = "B"
            alpha = 0.5
            lambda = 0.9
            "#,
        );
        assert!(matches!(err, Err(NetworkError::UnknownNode(_))));
    }

    #[test]
    fn bad_parameters_and_fields_rejected() {
        let out_of_range = r#"
            [[edges]]
            from = "A"
            to = "B"
            alpha = 0.8
            gamma = 0.5
            lambda = 0.9
            "#;
        assert!(matches!(GeneralNetwork::from_toml(out_of_range), Err(NetworkError::Parse(_))));
        assert!(GeneralNetwork::from_toml("colour = 3").is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"
            nodes = ["A", "x", "B"]
            terminals = ["A", "B"]
            [[edges]]
            from = "A"
            to = "x"
            alpha = 0.6
            gamma = 0.1
            lambda = 0.9
            "#;
        let net = GeneralNetwork::from_toml(text).unwrap();
        let again = GeneralNetwork::from_toml(&NetworkFile::from_network(&net).to_toml().unwrap()).unwrap();
        assert_eq!(net, again);
    }
}
