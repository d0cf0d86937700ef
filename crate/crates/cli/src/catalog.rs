//! The built-in group catalog used by `verify --catalog`.

pub const CATALOG: &[&str] = &[
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C16", "E4", "E8", "E9",
    "E16", "E27", "V4", "Q8", "D3", "D4", "D5", "D6", "Dih16", "C4xC2", "C4xC4", "C8xC2",
    "C4xC2xC2", "C2xC2xC3", "M16", "S3", "S4", "A4", "A5", "PSL(2,4)", "PSL(2,5)", "PGL(2,3)",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupspec::parse_group_spec;

    #[test]
    fn every_entry_parses() {
        for name in CATALOG {
            let g = parse_group_spec(name).unwrap().group;
            assert!(g.order() <= 60, "{name}");
        }
    }
}
