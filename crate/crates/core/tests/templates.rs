use std::path::PathBuf;

use treecount::synthgen::{builtin_template, TEMPLATE_NAMES};
use treecount::template::parse_template;

fn templates_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../templates")
}

#[test]
fn shipped_templates_match_builtins() {
    for name in TEMPLATE_NAMES {
        let file = parse_template(templates_dir().join(format!("{name}.txt"))).unwrap();
        let builtin = builtin_template(name).unwrap();
        assert_eq!(file, builtin, "{name}");
        let size: usize = name[1..].split('-').next().unwrap().parse().unwrap();
        assert_eq!(file.k(), size, "{name}");
    }
}
