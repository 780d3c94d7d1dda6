fn main() {
    std::process::exit(srl_cli::main_with(std::env::args_os()));
}
