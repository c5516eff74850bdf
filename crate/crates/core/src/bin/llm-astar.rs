fn main() -> std::process::ExitCode {
    llm_astar::cli::main()
}
