fn main() {
    std::process::exit(invosc::cli::run(std::env::args_os()));
}
