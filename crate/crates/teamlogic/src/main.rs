fn main() {
    std::process::exit(teamlogic::cli::main_with(std::env::args_os()));
}
