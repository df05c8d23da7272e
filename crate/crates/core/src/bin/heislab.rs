fn main() {
    std::process::exit(heislab::cli::main_with_args(std::env::args_os()));
}
