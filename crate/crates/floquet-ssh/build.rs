// Link the system OpenBLAS, which bundles a full LAPACK. The *-src build
// crates are deliberately avoided: the library is provided by the platform.
fn main() {
    println!("cargo:rustc-link-lib=dylib=openblas");
}
