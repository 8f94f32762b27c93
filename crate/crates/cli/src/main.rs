fn main() {
    std::process::exit(secondkind_cli::run(std::env::args_os()));
}
