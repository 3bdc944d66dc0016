fn main() {
    std::process::exit(hillgap::cli::main_with_args(std::env::args_os()));
}
