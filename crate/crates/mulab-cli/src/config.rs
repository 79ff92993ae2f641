//! Guard values with environment defaults; command-line flags override the
//! environment, the environment overrides the built-ins.

use mulab_core::construction::DEFAULT_KAPPA_GUARD;
use mulab_core::search::DEFAULT_MAX_INSTANCES;

#[derive(Debug, Clone)]
pub struct Guards {
    pub kappa_max: u32,
    pub ground_max: u32,
    pub alpha_max: u32,
    pub threads: usize,
    pub max_instances: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            kappa_max: DEFAULT_KAPPA_GUARD,
            ground_max: 4,
            alpha_max: 6,
            threads: 1,
            max_instances: DEFAULT_MAX_INSTANCES,
        }
    }
}

fn env_parse<T: core::str::FromStr>(name: &str) -> Option<T> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

impl Guards {
    /// Built-ins overridden by `MULAB_*` environment variables.
    pub fn from_env() -> Self {
        let mut g = Guards::default();
        if let Some(v) = env_parse("MULAB_KAPPA_MAX") {
            g.kappa_max = v;
        }
        if let Some(v) = env_parse("MULAB_GROUND_MAX") {
            g.ground_max = v;
        }
        if let Some(v) = env_parse("MULAB_ALPHA_MAX") {
            g.alpha_max = v;
        }
        if let Some(v) = env_parse("MULAB_THREADS") {
            g.threads = v;
        }
        if let Some(v) = env_parse("MULAB_MAX_INSTANCES") {
            g.max_instances = v;
        }
        g
    }
}
