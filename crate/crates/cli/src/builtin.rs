//! Built-in scenario library.
//!
//! Every builtin is an ordinary scenario document fed through the regular
//! parser, so the files under `scenarios/` double as format examples.
//! `bell` and `ghz` ship three sub-scenarios each, one per B-set variant;
//! `spin_orbit` is parameterized by the orbital quantum number `l`.

use csco_core::error::{Error, Result};
use csco_core::opexpr::{parse_scenario, Scenario};

pub const BELL: &str = "bell";
pub const GHZ: &str = "ghz";
pub const TWO_ELECTRON: &str = "two_electron";
pub const SPIN_ORBIT: &str = "spin_orbit";
pub const PLUS_PRODUCT: &str = "plus_product";

/// `(name, one-line description)` for the `list` subcommand.
pub const SUMMARIES: &[(&str, &str)] = &[
    (
        BELL,
        "two-qubit Bell basis from (XX, YY), measured against three single-qubit Pauli pairs",
    ),
    (
        GHZ,
        "three-qubit GHZ stabilizer basis (XYY, YXY, YYX), measured against three per-qubit Pauli triples",
    ),
    (
        TWO_ELECTRON,
        "coupled total-spin basis (S^2, S_z) of two spin-1/2 particles, measured in (sz1, sz2)",
    ),
    (
        SPIN_ORBIT,
        "spin-l orbital space coupled to a spin-1/2: (J^2, J_z) measured in (l_z, s_z); takes --l (default 1)",
    ),
    (
        PLUS_PRODUCT,
        "counterexample: |++> product state with uncertain but statistically independent Z outcomes",
    ),
];

const BELL_XX: &str = include_str!("../scenarios/bell_xx.json");
const BELL_YY: &str = include_str!("../scenarios/bell_yy.json");
const BELL_ZZ: &str = include_str!("../scenarios/bell_zz.json");
const GHZ_XYY: &str = include_str!("../scenarios/ghz_xyy.json");
const GHZ_YXY: &str = include_str!("../scenarios/ghz_yxy.json");
const GHZ_YYX: &str = include_str!("../scenarios/ghz_yyx.json");
const TWO_ELECTRON_DOC: &str = include_str!("../scenarios/two_electron.json");
const PLUS_PRODUCT_DOC: &str = include_str!("../scenarios/plus_product.json");

/// Raw documents of every builtin (for parser-corpus tests and `check`
/// round trips). spin_orbit uses the default `l = 1`.
pub fn builtin_documents() -> Vec<(&'static str, String)> {
    vec![
        (BELL, BELL_XX.to_string()),
        (BELL, BELL_YY.to_string()),
        (BELL, BELL_ZZ.to_string()),
        (GHZ, GHZ_XYY.to_string()),
        (GHZ, GHZ_YXY.to_string()),
        (GHZ, GHZ_YYX.to_string()),
        (TWO_ELECTRON, TWO_ELECTRON_DOC.to_string()),
        (SPIN_ORBIT, spin_orbit_document(1)),
        (PLUS_PRODUCT, PLUS_PRODUCT_DOC.to_string()),
    ]
}

/// Maximum orbital quantum number; keeps the dimension at 2(2l+1) ≤ 82.
pub const MAX_SPIN_ORBIT_L: u32 = 20;

fn spin_orbit_document(l: u32) -> String {
    format!(
        r#"{{
  "name": "spin_orbit(l={l})",
  "subsystems": [
    {{"kind": "spin", "s": {l}}},
    {{"kind": "spin", "s": 0.5}}
  ],
  "A": [
    {{"name": "J2", "expr": "(Sx(1)+Sx(2))^2 + (Sy(1)+Sy(2))^2 + (Sz(1)+Sz(2))^2"}},
    {{"name": "Jz", "expr": "Sz(1)+Sz(2)"}}
  ],
  "B": [
    {{"name": "lz", "expr": "Sz(1)"}},
    {{"name": "sz", "expr": "Sz(2)"}}
  ],
  "expected_C": [
    ["2*(Sy(2)*Sx(1) - Sx(2)*Sy(1))", "0"],
    ["2*(Sx(2)*Sy(1) - Sy(2)*Sx(1))", "0"]
  ],
  "bipartition": [[1], [2]]
}}"#
    )
}

/// Resolve a builtin name to its scenarios. `bell` and `ghz` return three
/// sub-scenarios (one per B-set variant); everything else returns one.
/// `l` is only legal for `spin_orbit`.
pub fn builtin_scenarios(name: &str, l: Option<u32>) -> Result<Vec<Scenario>> {
    if l.is_some() && name != SPIN_ORBIT {
        return Err(Error::Input(format!(
            "parameter --l only applies to the {SPIN_ORBIT} builtin"
        )));
    }
    let docs: Vec<String> = match name {
        BELL => vec![BELL_XX.into(), BELL_YY.into(), BELL_ZZ.into()],
        GHZ => vec![GHZ_XYY.into(), GHZ_YXY.into(), GHZ_YYX.into()],
        TWO_ELECTRON => vec![TWO_ELECTRON_DOC.into()],
        PLUS_PRODUCT => vec![PLUS_PRODUCT_DOC.into()],
        SPIN_ORBIT => {
            let l = l.unwrap_or(1);
            if l > MAX_SPIN_ORBIT_L {
                return Err(Error::Input(format!(
                    "spin_orbit parameter l must be at most {MAX_SPIN_ORBIT_L}, got {l}"
                )));
            }
            vec![spin_orbit_document(l)]
        }
        other => {
            return Err(Error::Input(format!(
                "unknown builtin '{other}'; try: bell, ghz, two_electron, spin_orbit, plus_product"
            )))
        }
    };
    docs.iter().map(|doc| parse_scenario(doc)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtin_documents_parse() {
        for (name, doc) in builtin_documents() {
            parse_scenario(&doc).unwrap_or_else(|e| panic!("builtin {name} failed: {e}"));
        }
    }

    #[test]
    fn bell_and_ghz_expose_three_variants() {
        assert_eq!(builtin_scenarios(BELL, None).unwrap().len(), 3);
        assert_eq!(builtin_scenarios(GHZ, None).unwrap().len(), 3);
        assert_eq!(builtin_scenarios(TWO_ELECTRON, None).unwrap().len(), 1);
    }

    #[test]
    fn spin_orbit_l_bounds() {
        assert!(builtin_scenarios(SPIN_ORBIT, Some(0)).is_ok());
        assert!(builtin_scenarios(SPIN_ORBIT, Some(20)).is_ok());
        assert!(builtin_scenarios(SPIN_ORBIT, Some(21)).is_err());
        assert!(builtin_scenarios(BELL, Some(1)).is_err());
    }

    #[test]
    fn unknown_name_is_an_input_error() {
        assert!(builtin_scenarios("nope", None).is_err());
    }

    #[test]
    fn two_electron_a_exprs_match_the_coupling_scheme() {
        let s = &builtin_scenarios(TWO_ELECTRON, None).unwrap()[0];
        assert_eq!(s.a_set[0].name, "S2");
        assert_eq!(s.a_set[1].name, "Sz");
        assert_eq!(s.b_set.len(), 2);
        assert_eq!(s.layout.total_dim(), 4);
    }
}
