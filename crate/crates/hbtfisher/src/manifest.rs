use serde::Serialize;

/// Everything needed to reproduce an output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Effective parameters after config-file merging and defaults, in a
    /// fixed order.
    pub parameters: Vec<(String, String)>,
    pub tool_version: String,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        Self {
            subcommand: subcommand.to_owned(),
            parameters: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        serde_json::json!({
            "subcommand": self.subcommand,
            "parameters": params,
            "tool_version": self.tool_version,
            "seed": self.seed,
        })
    }

    /// `#`-prefixed comment lines for CSV headers.
    pub fn csv_comments(&self) -> String {
        let mut out = format!("# subcommand: {}\n# tool_version: {}\n", self.subcommand, self.tool_version);
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed: {seed}\n"));
        }
        for (k, v) in &self.parameters {
            out.push_str(&format!("# param {k}: {v}\n"));
        }
        out
    }
}
