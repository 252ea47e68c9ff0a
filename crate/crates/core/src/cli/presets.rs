//! Built-in figure presets: a base configuration plus one override set per curve.

/// One curve of a preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresetCurve {
    pub label: &'static str,
    pub style: &'static str,
    pub color: &'static str,
    pub set: &'static [(&'static str, &'static str)],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub title: &'static str,
    pub base: &'static [(&'static str, &'static str)],
    pub curves: &'static [PresetCurve],
}

const fn curve(
    label: &'static str,
    style: &'static str,
    color: &'static str,
    set: &'static [(&'static str, &'static str)],
) -> PresetCurve {
    PresetCurve {
        label,
        style,
        color,
        set,
    }
}

const COMMON: &[(&str, &str)] = &[
    ("epsilon", "1"),
    ("delta", "0.05"),
    ("ohmicity", "1"),
    ("omega_c", "10"),
    ("beta", "inf"),
];

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1a",
        title: "strong coupling, Γ vs τ for several G",
        base: &[("variant", "strong"), ("j", "0.5")],
        curves: &[
            curve("G=1", "dashed", "red", &[("coupling", "1")]),
            curve("G=1.75", "dotdashed", "magenta", &[("coupling", "1.75")]),
            curve("G=2.5", "solid", "blue", &[("coupling", "2.5")]),
        ],
    },
    Preset {
        name: "fig1b",
        title: "weak coupling population decay for several G",
        base: &[("variant", "weak_pop")],
        curves: &[
            curve("G=0.02", "dashed", "red", &[("coupling", "0.02")]),
            curve("G=0.05", "dotdashed", "magenta", &[("coupling", "0.05")]),
            curve("G=0.1", "solid", "blue", &[("coupling", "0.1")]),
        ],
    },
    Preset {
        name: "fig2a",
        title: "strong coupling, Γ vs τ for several cutoffs",
        base: &[("variant", "strong"), ("j", "0.5"), ("coupling", "1")],
        curves: &[
            curve("omega_c=10", "dashed", "red", &[("omega_c", "10")]),
            curve("omega_c=15", "dotdashed", "magenta", &[("omega_c", "15")]),
            curve("omega_c=20", "solid", "blue", &[("omega_c", "20")]),
        ],
    },
    Preset {
        name: "fig2b",
        title: "weak coupling population decay for several cutoffs",
        base: &[("variant", "weak_pop"), ("coupling", "0.05")],
        curves: &[
            curve("omega_c=10", "dashed", "red", &[("omega_c", "10")]),
            curve("omega_c=15", "dotdashed", "magenta", &[("omega_c", "15")]),
            curve("omega_c=20", "solid", "blue", &[("omega_c", "20")]),
        ],
    },
    Preset {
        name: "fig3a",
        title: "strong coupling Γₙ with the system evolution removed",
        base: &[("variant", "strong_mod"), ("j", "0.5")],
        curves: &[
            curve("G=1", "dashed", "red", &[("coupling", "1")]),
            curve("G=1.75", "dotdashed", "magenta", &[("coupling", "1.75")]),
            curve("G=2.5", "solid", "blue", &[("coupling", "2.5")]),
        ],
    },
    Preset {
        name: "fig3b",
        title: "weak coupling filter-function rate for several G",
        base: &[("variant", "weak_filter"), ("j", "0.5"), ("n_spins", "1")],
        curves: &[
            curve("G=0.001", "dashed", "red", &[("coupling", "0.001")]),
            curve("G=0.003", "dotdashed", "magenta", &[("coupling", "0.003")]),
            curve("G=0.005", "solid", "blue", &[("coupling", "0.005")]),
        ],
    },
    Preset {
        name: "fig4a",
        title: "strong coupling, j = 1, for several G",
        base: &[("variant", "strong"), ("j", "1")],
        curves: &[
            curve("G=1", "dashed", "red", &[("coupling", "1")]),
            curve("G=1.75", "dotdashed", "magenta", &[("coupling", "1.75")]),
            curve("G=2.5", "solid", "blue", &[("coupling", "2.5")]),
        ],
    },
    Preset {
        name: "fig4b",
        title: "strong coupling, G = 1.5, for several j",
        base: &[("variant", "strong"), ("coupling", "1.5")],
        curves: &[
            curve("j=0.5", "dashed", "red", &[("j", "0.5")]),
            curve("j=1", "dotdashed", "magenta", &[("j", "1")]),
            curve("j=2", "solid", "blue", &[("j", "2")]),
        ],
    },
    Preset {
        name: "fig5a",
        title: "strong coupling Γₙ, j = 1",
        base: &[("variant", "strong_mod"), ("j", "1")],
        curves: &[
            curve("G=1", "dashed", "red", &[("coupling", "1")]),
            curve("G=2.5", "solid", "blue", &[("coupling", "2.5")]),
        ],
    },
    Preset {
        name: "fig5b",
        title: "weak coupling filter-function rate, two spins",
        base: &[("variant", "weak_filter"), ("j", "1"), ("n_spins", "2")],
        curves: &[
            curve("G=0.001", "dashed", "red", &[("coupling", "0.001")]),
            curve("G=0.005", "solid", "blue", &[("coupling", "0.005")]),
        ],
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

impl Preset {
    /// Shared settings applied before `base` and the per-curve overrides.
    pub fn common(&self) -> &'static [(&'static str, &'static str)] {
        COMMON
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::RawConfig;

    #[test]
    fn every_preset_resolves() {
        for p in PRESETS {
            for c in p.curves {
                let mut raw = RawConfig::default();
                for (k, v) in p.common().iter().chain(p.base).chain(c.set) {
                    raw.set(k, v).unwrap();
                }
                raw.resolve().unwrap();
            }
        }
    }

    #[test]
    fn curve_counts() {
        let counts: Vec<usize> = PRESETS.iter().map(|p| p.curves.len()).collect();
        assert_eq!(counts, [3, 3, 3, 3, 3, 3, 3, 3, 2, 2]);
    }
}
