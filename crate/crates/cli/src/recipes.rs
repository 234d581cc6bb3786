//! Canned configurations, one per figure.

use crate::config::{Family, RunConfig, Task};

#[derive(Debug, Clone)]
pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    /// `(subdirectory, config)` pairs.
    pub runs: Vec<(String, RunConfig)>,
}

/// Short-term and fractional-revival times for the N=20 time sequence.
const SEQUENCE: &str = "0,1/320,1/160,1/80,1/40,1/10,1/7,1/6,1/5,1/4,1/3,1/2";

fn exp(task: Task, n: &str, eta: &str) -> RunConfig {
    RunConfig::new(task, Family::Exponential)
        .with("N", n)
        .with("eta", eta)
}

pub fn figure_recipes() -> Vec<Recipe> {
    vec![
        Recipe {
            name: "fig1",
            description: "partial-wave probabilities, circular N=20 against spin-1/2 boson k^2=39",
            runs: vec![(
                "compare".into(),
                RunConfig::new(Task::CompareBoson, Family::Exponential)
                    .with("N", "20")
                    .with("k2", "39")
                    .with("s", "1/2")
                    .with("truncated", "true")
                    .with("tail_tol", "1e-16"),
            )],
        },
        Recipe {
            name: "fig2",
            description: "autocorrelation for N=20 and eta in {0, 1/2, 1}",
            runs: ["0", "0.5", "1"]
                .iter()
                .map(|eta| (format!("eta_{eta}"), exp(Task::Autocorr, "20", eta)))
                .collect(),
        },
        Recipe {
            name: "fig3",
            description: "density snapshots of the circular packet, N=20",
            runs: vec![(
                "evolve".into(),
                exp(Task::Evolve, "20", "1").with("times", SEQUENCE),
            )],
        },
        Recipe {
            name: "fig4",
            description: "carpet at theta=pi/2 for the circular packet, N=20",
            runs: vec![(
                "carpet".into(),
                exp(Task::Carpet, "20", "1")
                    .with("theta", "pi/2")
                    .with("n_times", "2048")
                    .with("t_max", "0.5")
                    .with("n_phi", "720"),
            )],
        },
        Recipe {
            name: "fig5",
            description: "linearized (classical) evolution of the linear packet, N=50, over one revival period",
            runs: vec![(
                "carpet".into(),
                exp(Task::Carpet, "50", "0")
                    .with("frame", "x")
                    .with("weighted", "true")
                    .with("spectrum", "classical")
                    .with("rate", "1")
                    .with("t_max", "1")
                    .with("n_times", "1024")
                    .with("n_theta", "361"),
            )],
        },
        Recipe {
            name: "fig6",
            description: "carpet of the linear packet along theta', N=50",
            runs: vec![(
                "carpet".into(),
                exp(Task::Carpet, "50", "0")
                    .with("frame", "x")
                    .with("weighted", "true")
                    .with("t_max", "0.5")
                    .with("n_times", "1024")
                    .with("n_theta", "361"),
            )],
        },
        Recipe {
            name: "fig7",
            description: "uniform linear packet with eta*N=20",
            runs: vec![(
                "evolve".into(),
                RunConfig::new(Task::Evolve, Family::UniformLinear)
                    .with("eta_n", "20")
                    .with("times", SEQUENCE),
            )],
        },
        Recipe {
            name: "fig8",
            description: "clones and mutants for eta in {1, 1/2, 1/4, 0} at T_rev/3 and T_rev/4",
            runs: ["1", "0.5", "0.25", "0"]
                .iter()
                .flat_map(|eta| {
                    let mut v = vec![(
                        format!("eta_{eta}/evolve"),
                        exp(Task::Evolve, "20", eta).with("times", "1/3,1/4"),
                    )];
                    for (tag, t) in [("third", "1/3"), ("quarter", "1/4")] {
                        v.push((
                            format!("eta_{eta}/clones_{tag}"),
                            exp(Task::Clones, "20", eta).with("time", t),
                        ));
                    }
                    v
                })
                .collect(),
        },
        Recipe {
            name: "fig9",
            description: "elliptic packet, eta=1/2, N=20",
            runs: vec![(
                "evolve".into(),
                exp(Task::Evolve, "20", "0.5").with("times", SEQUENCE),
            )],
        },
        Recipe {
            name: "fig10",
            description: "symmetric top, irrational delta=1/sqrt(3), r=4, K=0, beta=pi/2",
            runs: vec![(
                "top".into(),
                RunConfig::new(Task::TopEvolve, Family::Janssen)
                    .with("r", "4")
                    .with("lambda", "pi/2")
                    .with("delta", &format!("{}", 1.0 / 3f64.sqrt()))
                    .with("beta", "pi/2")
                    .with("time_unit", "rev_k")
                    .with("times", "0,0.125,0.25,0.5,1,1.5,2,3"),
            )],
        },
        Recipe {
            name: "fig11",
            description: "symmetric top, delta=1/2, r=4, K=0, beta=pi/2",
            runs: vec![(
                "top".into(),
                RunConfig::new(Task::TopEvolve, Family::Janssen)
                    .with("r", "4")
                    .with("lambda", "pi/2")
                    .with("delta", "1/2")
                    .with("beta", "pi/2")
                    .with("times", "0,1/12,1/6,1/3,1/2,1"),
            )],
        },
    ]
}

pub fn recipe(name: &str) -> Option<Recipe> {
    figure_recipes().into_iter().find(|r| r.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn names_are_stable() {
        let names: Vec<_> = figure_recipes().iter().map(|r| r.name).collect();
        let expect: Vec<String> = (1..=11).map(|i| format!("fig{i}")).collect();
        assert_eq!(names, expect);
    }

    #[test]
    fn recipes_are_valid_configs() {
        for r in figure_recipes() {
            for (_, cfg) in &r.runs {
                let back =
                    parse_config(&cfg.to_text(), &[]).unwrap_or_else(|e| panic!("{}: {e}", r.name));
                assert_eq!(&back, cfg);
            }
        }
    }

    #[test]
    fn captions() {
        let f1 = recipe("fig1").unwrap();
        assert_eq!(f1.runs[0].1.n, Some(20.0));
        assert_eq!(f1.runs[0].1.k2, Some(39.0));
        let f8 = recipe("fig8").unwrap();
        assert_eq!(f8.runs.len(), 12);
        let f11 = &recipe("fig11").unwrap().runs[0].1;
        assert_eq!(f11.r, Some(4.0));
        assert!((f11.beta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
