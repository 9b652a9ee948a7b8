#[cfg(all(feature = "c", feature = "d"))]
fn baz() {
    let y = 2;
}
