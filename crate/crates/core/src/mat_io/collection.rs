use serde::{Deserialize, Serialize};

use super::market::{MatrixMeta, Symmetry};

/// Published characteristics of the five collection matrices.
pub fn published() -> Vec<MatrixMeta> {
    vec![
        MatrixMeta::new("add32", 4960, 4960, 23884, Symmetry::None),
        MatrixMeta::new("utm5940", 5940, 5940, 83842, Symmetry::None),
        MatrixMeta::new("sherman3", 5005, 5005, 20033, Symmetry::Structural),
        MatrixMeta::new("codecs4812.dc", 4812, 4812, 45192, Symmetry::None),
        MatrixMeta::new("bcsstk13", 2003, 2003, 42943, Symmetry::Symmetric),
    ]
}

/// Expected characteristics for a collection matrix, looked up by name.
pub fn published_entry(name: &str) -> Option<MatrixMeta> {
    published().into_iter().find(|m| m.name == name)
}

/// Outcome of comparing observed characteristics with expected ones.
///
/// An entry-count difference is a warning only: public copies of
/// collection matrices sometimes differ in how many explicit zeros they
/// store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub name: String,
    pub passed: bool,
    pub mismatches: Vec<String>,
    pub warnings: Vec<String>,
    pub observed_entries: usize,
}

pub fn validate_characteristics(meta: &MatrixMeta, expected: &MatrixMeta) -> ValidationReport {
    let mut mismatches = Vec::new();
    let mut warnings = Vec::new();
    if (meta.n_rows, meta.n_cols) != (expected.n_rows, expected.n_cols) {
        mismatches.push(format!(
            "dimension {} x {} (expected {} x {})",
            meta.n_rows, meta.n_cols, expected.n_rows, expected.n_cols
        ));
    }
    if meta.symmetry != expected.symmetry {
        mismatches.push(format!(
            "symmetry {} (expected {})",
            meta.symmetry, expected.symmetry
        ));
    }
    if meta.entries != expected.entries {
        warnings.push(format!(
            "entry count {} (expected {})",
            meta.entries, expected.entries
        ));
    }
    ValidationReport {
        name: meta.name.clone(),
        passed: mismatches.is_empty(),
        mismatches,
        warnings,
        observed_entries: meta.entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sherman3_passes() {
        let meta = MatrixMeta::new("sherman3", 5005, 5005, 20033, Symmetry::Structural);
        let report = validate_characteristics(&meta, &published_entry("sherman3").unwrap());
        assert!(report.passed);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn codecs_passes() {
        let meta = MatrixMeta::new("codecs4812.dc", 4812, 4812, 45192, Symmetry::None);
        assert!(validate_characteristics(&meta, &published_entry("codecs4812.dc").unwrap()).passed);
    }

    #[test]
    fn dimension_mismatch_fails() {
        let meta = MatrixMeta::new("eye", 3, 3, 3, Symmetry::Symmetric);
        let expected = MatrixMeta::new("eye", 4, 4, 3, Symmetry::Symmetric);
        let report = validate_characteristics(&meta, &expected);
        assert!(!report.passed);
        assert!(report.mismatches[0].contains("dimension"));
    }

    #[test]
    fn entry_count_is_a_warning() {
        let meta = MatrixMeta::new("utm5940", 5940, 5940, 83840, Symmetry::None);
        let report = validate_characteristics(&meta, &published_entry("utm5940").unwrap());
        assert!(report.passed);
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.observed_entries, 83840);
    }

    #[test]
    fn table_values() {
        let add32 = published_entry("add32").unwrap();
        assert_eq!((add32.n_rows, add32.entries), (4960, 23884));
        let bcsstk13 = published_entry("bcsstk13").unwrap();
        assert_eq!(
            (bcsstk13.n_rows, bcsstk13.symmetry),
            (2003, Symmetry::Symmetric)
        );
        assert_eq!(published().len(), 5);
    }
}
