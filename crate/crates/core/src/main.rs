use gl3_subconvex::cli::{main_with, DIGITS_ENV};

fn main() {
    let digits = std::env::var(DIGITS_ENV).ok();
    let code = main_with(
        std::env::args_os(),
        digits.as_deref(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
