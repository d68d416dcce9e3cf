void f(void)
{
    int volatility = 0;
    (void)volatility;
    __asm__ __volatile__ ("");
}
