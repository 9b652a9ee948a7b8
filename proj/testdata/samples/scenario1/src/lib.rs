#[cfg(feature = "a")]
fn foo() {
    #[cfg(any(feature = "b", feature = "c"))]
    fn bar() {
        let x = 1;
    }

    fn qux() {
        bar();
    }
}
