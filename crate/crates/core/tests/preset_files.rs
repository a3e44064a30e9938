use std::path::PathBuf;

use qdc_core::ncalgebra::Presentation;
use qdc_core::presets::{preset, PresetId};

fn preset_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

#[test]
fn shipped_files_match_builtin_presets() {
    for id in PresetId::ALL {
        let path = preset_dir().join(format!("{id}.json"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, preset(id).to_json() + "\n", "{id} is stale; re-export with `qdc presets --export presets`");
    }
}

#[test]
fn shipped_files_load() {
    for id in PresetId::ALL {
        let text = std::fs::read_to_string(preset_dir().join(format!("{id}.json"))).unwrap();
        let loaded = Presentation::from_json(&text).unwrap();
        assert_eq!(loaded.to_json(), preset(id).to_json());
    }
}
