//! Checks the shipped molar-mass table against masses summed from atomic
//! weights with a formula parser written here.

use std::collections::HashMap;

use patglass::basis::{mass_to_mol, mol_to_mass, MolarMassTable};
use patglass::tabular::CompoundLexicon;

const ATOMIC_WEIGHTS: &[(&str, f64)] = &[
    ("O", 15.999), ("Si", 28.085), ("Al", 26.982), ("B", 10.81), ("P", 30.974),
    ("Li", 6.94), ("Na", 22.990), ("K", 39.098), ("Rb", 85.468), ("Cs", 132.905),
    ("Be", 9.0122), ("Mg", 24.305), ("Ca", 40.078), ("Sr", 87.62), ("Ba", 137.33),
    ("Zn", 65.38), ("Cd", 112.41), ("Pb", 207.2), ("Ti", 47.867), ("Zr", 91.224),
    ("Hf", 178.49), ("Nb", 92.906), ("Ta", 180.948), ("V", 50.942), ("Cr", 51.996),
    ("Mo", 95.95), ("W", 183.84), ("Mn", 54.938), ("Fe", 55.845), ("Co", 58.933),
    ("Ni", 58.693), ("Cu", 63.546), ("Ag", 107.868), ("Ga", 69.723), ("In", 114.818),
    ("Ge", 72.630), ("Sn", 118.71), ("Sb", 121.760), ("As", 74.922), ("Bi", 208.980),
    ("Te", 127.60), ("Se", 78.971), ("S", 32.06), ("Tl", 204.38), ("Y", 88.906),
    ("Sc", 44.956), ("La", 138.905), ("Ce", 140.116), ("Pr", 140.908), ("Nd", 144.242),
    ("Sm", 150.36), ("Eu", 151.964), ("Gd", 157.25), ("Tb", 158.925), ("Dy", 162.500),
    ("Ho", 164.930), ("Er", 167.259), ("Tm", 168.934), ("Yb", 173.045), ("Lu", 174.967),
    ("Th", 232.038), ("U", 238.029),
];

fn formula_mass(formula: &str, weights: &HashMap<&str, f64>) -> f64 {
    let chars: Vec<char> = formula.chars().collect();
    let mut i = 0;
    let mut total = 0.0;
    while i < chars.len() {
        assert!(chars[i].is_ascii_uppercase(), "unexpected {formula}");
        let mut sym = chars[i].to_string();
        i += 1;
        if i < chars.len() && chars[i].is_ascii_lowercase() {
            sym.push(chars[i]);
            i += 1;
        }
        let mut n = 0u32;
        while i < chars.len() && chars[i].is_ascii_digit() {
            n = n * 10 + chars[i].to_digit(10).unwrap();
            i += 1;
        }
        total += weights[sym.as_str()] * n.max(1) as f64;
    }
    total
}

#[test]
fn table_agrees_with_atomic_weights() {
    let weights: HashMap<&str, f64> = ATOMIC_WEIGHTS.iter().copied().collect();
    let table = MolarMassTable::builtin();
    let lexicon = CompoundLexicon::builtin();
    assert_eq!(table.len(), lexicon.len());
    for f in lexicon.formulas() {
        let expected = formula_mass(f, &weights);
        let got = table.get(f).unwrap();
        assert!((got - expected).abs() / expected < 1e-3, "{f}: {got} vs {expected}");
    }
}

#[test]
fn binary_conversion_matches_hand_arithmetic() {
    let weights: HashMap<&str, f64> = ATOMIC_WEIGHTS.iter().copied().collect();
    let ox = vec!["SiO2".to_string(), "Na2O".to_string()];
    let (m_si, m_na) = (formula_mass("SiO2", &weights), formula_mass("Na2O", &weights));
    let wt_si = 100.0 * m_si / (m_si + m_na);
    let table = MolarMassTable::builtin();
    let wt = mol_to_mass(&[50.0, 50.0], &ox, &table).unwrap();
    assert!((wt[0] - wt_si).abs() < 0.01);
    assert_eq!(wt, vec![49.22, 50.78]);
    assert_eq!(mass_to_mol(&wt, &ox, &table).unwrap(), vec![50.0, 50.0]);
}
