fn main() {
    std::process::exit(isobound::cli::main_with_args(std::env::args_os()));
}
