fn main() {
    let mut out = String::new();
    let code = hdamodel::cli::run_from(std::env::args(), &mut out);
    print!("{out}");
    std::process::exit(code);
}
