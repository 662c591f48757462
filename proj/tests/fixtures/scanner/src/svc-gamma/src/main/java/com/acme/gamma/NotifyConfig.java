package com.acme.gamma;

import org.springframework.context.annotation.Bean;
import org.springframework.context.annotation.Configuration;

@Configuration
public class NotifyConfig {

    private static final String TEMPLATE = """
        @GetMapping("/text-block")
        public void nope() {}
        """;

    @Bean
    public Mailer mailer() {
        return new Mailer(TEMPLATE);
    }
}
