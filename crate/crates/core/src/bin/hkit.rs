fn main() {
    std::process::exit(hkit::cli::main_with_args(std::env::args_os()));
}
