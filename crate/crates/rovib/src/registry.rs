//! Molecule and potential-parameter registry.
//!
//! Entries come from a flat key-value config format, one molecule per
//! `[section]` header, with keys exactly:
//! `de_cm`, `re_angstrom`, `mu_amu`, `sigma`, `delta`, `alpha_inv_angstrom`,
//! `q`, `branch`. Built-in defaults cover H2 and Ar2; the environment
//! variable `ROVIB_REGISTRY` may point at a file whose entries are added on
//! top (same-name entries replace the built-ins).

use std::collections::BTreeMap;
use std::path::Path;

use crate::constants::{AMU_TO_EV, INVCM_TO_EV};
use crate::error::{Error, Result};

/// Spectroscopic constants of one diatomic molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub name: String,
    /// Dissociation energy D_e in cm^-1.
    pub de_cm: f64,
    /// Equilibrium bond length r_e in angstrom.
    pub re_angstrom: f64,
    /// Reduced mass in a.m.u. Taken as given; never recomputed from atomic masses.
    pub mu_amu: f64,
}

impl Molecule {
    /// D_e in eV.
    pub fn de_ev(&self) -> f64 {
        self.de_cm * INVCM_TO_EV
    }

    /// mu * c^2 in eV.
    pub fn mu_c2_ev(&self) -> f64 {
        self.mu_amu * AMU_TO_EV
    }

    fn validate(&self) -> Result<()> {
        if !(self.de_cm > 0.0) {
            return Err(Error::RejectedInput(format!("{}: de_cm must be > 0", self.name)));
        }
        if !(self.re_angstrom > 0.0) {
            return Err(Error::RejectedInput(format!("{}: re_angstrom must be > 0", self.name)));
        }
        if !(self.mu_amu > 0.0) {
            return Err(Error::RejectedInput(format!("{}: mu_amu must be > 0", self.name)));
        }
        Ok(())
    }
}

/// Which sign branch of the deformed hyperbolic form is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// Full parameter set for the deformed hyperbolic potential of one molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialParams {
    pub molecule: Molecule,
    pub sigma: f64,
    /// Scale divisor for sigma; must be nonzero.
    pub delta: f64,
    /// Range parameter alpha in 1/angstrom.
    pub alpha: f64,
    /// Deformation parameter; nonzero.
    pub q: f64,
    pub branch: Branch,
}

impl PotentialParams {
    /// The deformation strength that enters every formula: sigma / delta.
    pub fn sigma_eff(&self) -> f64 {
        self.sigma / self.delta
    }

    /// Well depth D = D_e / (1 - sigma_eff)^2 in eV.
    pub fn depth_ev(&self) -> f64 {
        let s = self.sigma_eff();
        self.molecule.de_ev() / ((1.0 - s) * (1.0 - s))
    }

    pub fn validate(&self) -> Result<()> {
        self.molecule.validate()?;
        if self.delta == 0.0 {
            return Err(Error::RejectedInput(format!("{}: delta must be nonzero", self.molecule.name)));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::RejectedInput(format!("{}: alpha must be > 0", self.molecule.name)));
        }
        if self.q == 0.0 || !self.q.is_finite() {
            return Err(Error::RejectedInput(format!("{}: q must be finite and nonzero", self.molecule.name)));
        }
        // sigma_eff = 1 makes the depth D diverge.
        if (self.sigma_eff() - 1.0).abs() < 1e-12 {
            return Err(Error::RejectedInput(format!(
                "{}: sigma/delta may not equal 1 (depth diverges)",
                self.molecule.name
            )));
        }
        Ok(())
    }
}

/// An immutable, validated collection of potential parameter sets.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, PotentialParams>,
}

impl Registry {
    pub fn get(&self, name: &str) -> Result<&PotentialParams> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownMolecule(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn insert(&mut self, p: PotentialParams) -> Result<()> {
        p.validate()?;
        self.entries.insert(p.molecule.name.clone(), p);
        Ok(())
    }
}

fn h2_molecule() -> Molecule {
    Molecule {
        name: "H2".into(),
        de_cm: 38281.0,
        re_angstrom: 0.7414,
        mu_amu: 0.50407,
    }
}

/// Built-in defaults: H2 and Ar2.
pub fn builtin_registry() -> Registry {
    let mut reg = Registry::default();
    reg.insert(PotentialParams {
        molecule: h2_molecule(),
        sigma: 426.826,
        delta: 463.102,
        alpha: 0.9327,
        q: 1.0,
        branch: Branch::Plus,
    })
    .expect("builtin H2 must validate");
    reg.insert(PotentialParams {
        molecule: Molecule {
            name: "Ar2".into(),
            de_cm: 99.55,
            re_angstrom: 3.759,
            mu_amu: 19.9812,
        },
        sigma: 25.23,
        delta: 41.75,
        alpha: 0.6604,
        q: 1.0,
        branch: Branch::Plus,
    })
    .expect("builtin Ar2 must validate");
    reg
}

/// The four alternate fitted (sigma, delta, alpha) shape rows of the
/// light-molecule parameterization study, applied to `base`'s molecule
/// constants; row 0 is the default shape.
pub fn fit_variants(base: &PotentialParams) -> [PotentialParams; 4] {
    let rows = [
        (426.826, 463.102, 0.9327),
        (47.294, 102.341, 0.6146),
        (28.685, 117.121, 0.3826),
        (21.250, 213.212, 0.1762),
    ];
    rows.map(|(sigma, delta, alpha)| PotentialParams {
        molecule: base.molecule.clone(),
        sigma,
        delta,
        alpha,
        q: base.q,
        branch: base.branch,
    })
}

/// The fitted shape rows on the built-in H2 constants.
pub fn h2_fit_variants() -> [PotentialParams; 4] {
    let base = PotentialParams {
        molecule: h2_molecule(),
        sigma: 426.826,
        delta: 463.102,
        alpha: 0.9327,
        q: 1.0,
        branch: Branch::Plus,
    };
    fit_variants(&base)
}

/// Built-ins plus (when set) the entries from the file named by `ROVIB_REGISTRY`.
pub fn default_registry() -> Result<Registry> {
    let mut reg = builtin_registry();
    if let Ok(path) = std::env::var("ROVIB_REGISTRY") {
        if !path.is_empty() {
            for p in load_registry(Path::new(&path))? {
                reg.insert(p)?;
            }
        }
    }
    Ok(reg)
}

/// Parses the flat key-value config format. Every key is mandatory.
pub fn load_registry(path: &Path) -> Result<Vec<PotentialParams>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_registry(&text)
}

fn parse_registry(text: &str) -> Result<Vec<PotentialParams>> {
    let mut out = Vec::new();
    let mut current: Option<(String, usize, BTreeMap<String, (f64, String)>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(Error::Parse {
                line: lineno,
                message: "section header missing closing ']'".into(),
            })?;
            if name.trim().is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "empty section name".into(),
                });
            }
            if let Some(section) = current.take() {
                out.push(finish_section(section)?);
            }
            current = Some((name.trim().to_string(), lineno, BTreeMap::new()));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::Parse {
            line: lineno,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let Some((_, _, fields)) = current.as_mut() else {
            return Err(Error::Parse {
                line: lineno,
                message: "key-value pair before any [section] header".into(),
            });
        };
        if key == "branch" {
            fields.insert(key.to_string(), (f64::NAN, value.to_string()));
        } else {
            let parsed: f64 = value.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("field '{key}': cannot parse '{value}' as a number"),
            })?;
            fields.insert(key.to_string(), (parsed, String::new()));
        }
    }
    if let Some(section) = current.take() {
        out.push(finish_section(section)?);
    }
    Ok(out)
}

fn finish_section(
    (name, line, fields): (String, usize, BTreeMap<String, (f64, String)>),
) -> Result<PotentialParams> {
    let get = |field: &str| -> Result<f64> {
        fields
            .get(field)
            .map(|(v, _)| *v)
            .ok_or_else(|| Error::MissingField {
                molecule: name.clone(),
                field: field.to_string(),
            })
    };
    let branch = match fields.get("branch") {
        Some((_, label)) => match label.as_str() {
            "plus" | "+" => Branch::Plus,
            "minus" | "-" => Branch::Minus,
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("branch must be 'plus' or 'minus', got '{other}'"),
                })
            }
        },
        None => {
            return Err(Error::MissingField {
                molecule: name,
                field: "branch".into(),
            })
        }
    };
    let de_cm = get("de_cm")?;
    let re_angstrom = get("re_angstrom")?;
    let mu_amu = get("mu_amu")?;
    let sigma = get("sigma")?;
    let delta = get("delta")?;
    let alpha = get("alpha_inv_angstrom")?;
    let q = get("q")?;
    let params = PotentialParams {
        molecule: Molecule { name, de_cm, re_angstrom, mu_amu },
        sigma,
        delta,
        alpha,
        q,
        branch,
    };
    params.validate()?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_match_reference_constants() {
        let reg = builtin_registry();
        let h2 = reg.get("H2").unwrap();
        assert_eq!(h2.molecule.de_cm, 38281.0);
        assert_eq!(h2.molecule.re_angstrom, 0.7414);
        assert_eq!(h2.molecule.mu_amu, 0.50407);
        let ar2 = reg.get("Ar2").unwrap();
        assert_eq!(ar2.molecule.de_cm, 99.55);
        assert_eq!(ar2.molecule.re_angstrom, 3.759);
        assert_eq!(ar2.molecule.mu_amu, 19.9812);
        assert!(reg.get("Xe2").is_err());
    }

    #[test]
    fn parse_round_trip() {
        let text = "
# comment line
[Test]
de_cm = 100.0
re_angstrom = 2.0
mu_amu = 10.0
sigma = 3.0
delta = 6.0
alpha_inv_angstrom = 0.5
q = 1.0
branch = plus
";
        let entries = parse_registry(text).unwrap();
        assert_eq!(entries.len(), 1);
        let p = &entries[0];
        assert_eq!(p.molecule.name, "Test");
        assert_eq!(p.sigma_eff(), 0.5);
        assert_eq!(p.branch, Branch::Plus);
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let bad_number = "[A]\nde_cm = wat\n";
        match parse_registry(bad_number) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("de_cm"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        let missing = "[A]\nde_cm = 1\nre_angstrom = 1\nmu_amu = 1\nsigma = 1\ndelta = 2\nalpha_inv_angstrom = 1\nq = 1\n";
        match parse_registry(missing) {
            Err(Error::MissingField { molecule, field }) => {
                assert_eq!(molecule, "A");
                assert_eq!(field, "branch");
            }
            other => panic!("expected missing-field error, got {other:?}"),
        }
    }

    #[test]
    fn sigma_eff_of_one_is_rejected() {
        let mut p = builtin_registry().get("H2").unwrap().clone();
        p.sigma = 5.0;
        p.delta = 5.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn h2_variants_share_molecule() {
        let rows = h2_fit_variants();
        assert_eq!(rows.len(), 4);
        for p in &rows {
            p.validate().unwrap();
            assert_eq!(p.molecule.de_cm, 38281.0);
        }
        assert_eq!(rows[3].alpha, 0.1762);
    }
}
