//! The shipped config schema stays in step with `RunConfig`.

use hvlab_core::RunConfig;
use serde_json::Value;

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/run-config.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn schema_lists_every_field_with_its_default() {
    let s = schema();
    let props = s["properties"].as_object().unwrap();
    let defaults: Value = serde_json::from_str(&RunConfig::default().to_json()).unwrap();
    let fields = defaults.as_object().unwrap();
    assert_eq!(props.len(), fields.len());
    for (k, v) in fields {
        let d = &props.get(k).unwrap_or_else(|| panic!("schema misses {k}"))["default"];
        assert_eq!(d.as_f64().or(d.as_null().map(|_| 0.0)), v.as_f64().or(v.as_null().map(|_| 0.0)), "{k}");
    }
    assert_eq!(s["properties"]["version"]["const"], hvlab_core::config::CONFIG_VERSION);
}

#[test]
fn unknown_fields_are_rejected_like_the_schema_says() {
    assert_eq!(schema()["additionalProperties"], false);
    assert!(RunConfig::from_json(r#"{"orders": 10}"#).is_err());
}
