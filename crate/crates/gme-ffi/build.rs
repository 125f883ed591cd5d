use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("gme.h");
    std::fs::create_dir_all(header.parent().unwrap()).unwrap();

    let mut enum_config = cbindgen::EnumConfig::default();
    enum_config.rename_variants = cbindgen::RenameRule::ScreamingSnakeCase;
    enum_config.prefix_with_name = true;

    let mut config = cbindgen::Config::default();
    config.enumeration = enum_config;

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .with_language(cbindgen::Language::C)
        .with_include_guard("GME_H")
        .with_cpp_compat(true)
        .with_documentation(true)
        .with_header(
            "/* C interface for the gme toolkit: states, invariant signals, and\n\
             \x20* the verification sweep. Generated by cbindgen; do not edit. */",
        )
        .generate()
        .expect("header generation failed")
        .write_to_file(&header);

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
