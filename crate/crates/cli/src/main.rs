fn main() {
    std::process::exit(hbisect_cli::main_with(std::env::args_os()));
}
