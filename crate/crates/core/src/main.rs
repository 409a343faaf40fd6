fn main() {
    std::process::exit(tropint::cli::main_with_args(std::env::args_os()));
}
