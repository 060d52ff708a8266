fn main() {
    std::process::exit(gradreg::cli::main_with_args(std::env::args_os()));
}
