//! Which subcommand path reaches each library operation.

pub struct Entry {
    pub module: &'static str,
    pub operation: &'static str,
    pub path: &'static str,
}

const fn e(module: &'static str, operation: &'static str, path: &'static str) -> Entry {
    Entry { module, operation, path }
}

pub const REGISTRY: &[Entry] = &[
    e("info", "binary_entropy", "entropy binary"),
    e("info", "shannon_entropy", "entropy shannon"),
    e("info", "mutual_information", "entropy mutual"),
    e("info", "conditional_entropy", "entropy conditional"),
    e("info", "cascade", "cascade"),
    e("channels", "transmit", "secrecy transmit"),
    e("channels", "compose", "secrecy compose"),
    e("channels", "forward_conceptual", "secrecy forward-conceptual"),
    e("channels", "conditional_mi_given_z", "secrecy cmi"),
    e("secrecy", "cs", "secrecy cs"),
    e("secrecy", "cs_bar_bsc", "secrecy cs-bar"),
    e("secrecy", "cs_bar_upper", "secrecy cs-bar-upper"),
    e("secrecy", "cs_bar_lower", "secrecy cs-bar-lower"),
    e("qstate", "von_neumann_entropy", "holevo entropy"),
    e("qstate", "trace_distance", "holevo trace-distance"),
    e("qstate", "fidelity", "holevo fidelity"),
    e("qstate", "relative_entropy", "holevo relative-entropy"),
    e("qstate", "apply_channel", "holevo apply"),
    e("qstate", "check_dpi", "holevo dpi"),
    e("qstate", "check_contractivity", "holevo contractivity"),
    e("qstate", "tensor", "holevo tensor"),
    e("holevo", "holevo_chi", "holevo chi"),
    e("holevo", "secrecy_rate", "holevo rate"),
    e("holevo", "optimize_secrecy_rate", "holevo optimize"),
    e("bounds", "fano_min_error", "bounds fano"),
    e("bounds", "blocklength_bound", "bounds blocklength"),
    e("bounds", "helstrom_multistate_lower", "bounds helstrom-multi"),
    e("bounds", "helstrom_two_state", "bounds helstrom"),
    e("bounds", "c_eve_gap", "bounds eve-gap"),
    e("polar", "split_minus", "polar minus"),
    e("polar", "split_plus", "polar plus"),
    e("polar", "conservation_residual", "polar residual"),
    e("polar", "polarize", "polar polarize"),
    e("polar", "secure_index_set", "polar index-set"),
    e("rates", "overlap", "rates overlap"),
    e("rates", "prune", "rates prune"),
    e("rates", "rate_branch", "rates branch"),
    e("rates", "select_branch", "rates select"),
    e("rates", "adaptive_rates", "rates adaptive"),
    e("protosim", "build_code", "simulate"),
    e("protosim", "run_transmission", "simulate"),
    e("protosim", "resource_distance", "simulate"),
    e("protosim", "authentication_probability", "simulate"),
    e("protosim", "domination_experiment", "domination"),
    e("games", "bias", "games bias"),
    e("games", "win_probability", "games win"),
    e("games", "classical_optimum", "games classical"),
    e("games", "epsilon_optimality_check", "games eps-check"),
    e("games", "multiplayer_bias", "games multi"),
    e("verify", "run_all", "verify"),
];

pub fn lookup(operation: &str) -> Option<&'static Entry> {
    REGISTRY.iter().find(|e| e.operation == operation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Cli;
    use clap::CommandFactory;
    use std::collections::BTreeSet;

    fn leaves(cmd: &clap::Command, prefix: &str, out: &mut BTreeSet<String>) {
        for sub in cmd.get_subcommands() {
            let path = if prefix.is_empty() { sub.get_name().to_string() } else { format!("{prefix} {}", sub.get_name()) };
            if sub.has_subcommands() {
                leaves(sub, &path, out);
            } else {
                out.insert(path);
            }
        }
    }

    #[test]
    fn every_operation_has_one_path() {
        let mut seen = BTreeSet::new();
        for e in REGISTRY {
            assert!(seen.insert(e.operation), "{} listed twice", e.operation);
        }
        assert_eq!(REGISTRY.len(), 50);
    }

    #[test]
    fn paths_exist_and_are_all_used() {
        let mut tree = BTreeSet::new();
        leaves(&Cli::command(), "", &mut tree);
        let used: BTreeSet<String> = REGISTRY.iter().map(|e| e.path.to_string()).collect();
        for p in &used {
            assert!(tree.contains(p), "no subcommand {p}");
        }
        assert_eq!(used, tree);
    }
}
