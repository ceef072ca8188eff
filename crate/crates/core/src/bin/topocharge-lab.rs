fn main() {
    std::process::exit(topocharge_lab::cli::main_with_args(std::env::args_os()));
}
