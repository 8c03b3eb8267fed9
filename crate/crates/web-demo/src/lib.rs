//! Browser demo for the homomorphism-embedding pipeline.
//!
//! All logic lives in [`api`] as plain JSON-string functions so it can be
//! tested on the host; `bindings` wraps them for wasm-bindgen when compiled
//! for wasm32. Build with:
//!
//! ```text
//! cargo build -p homembed-web --target wasm32-unknown-unknown --release
//! wasm-bindgen --target web --out-dir crates/web-demo/static/pkg \
//!     target/wasm32-unknown-unknown/release/homembed_web.wasm
//! ```
//!
//! then serve `crates/web-demo/static/`.

pub mod api;

#[cfg(target_arch = "wasm32")]
mod bindings;
