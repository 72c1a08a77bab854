fn main() {
    std::process::exit(singscheme::cli::run(std::env::args_os()));
}
