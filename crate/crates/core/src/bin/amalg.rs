fn main() {
    std::process::exit(triamalg::cli::main_with_args(std::env::args_os()));
}
